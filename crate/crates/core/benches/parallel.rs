use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use strongfree_core::ensembles::{sample, EnsembleKind, EnsembleSpec};
use strongfree_core::freelimit::{free_add_convolve_with, semicircle_measure_with, CompactMeasure};
use strongfree_core::par::map_indexed;
use strongfree_core::spectral::operator_norm;
use strongfree_core::{Execution, Seed};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn convolution(c: &mut Criterion) {
    let mu = CompactMeasure::atomic(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
    let nu = semicircle_measure_with(1.0, 512).unwrap();
    let mut group = c.benchmark_group("free_add_convolve");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| free_add_convolve_with(&mu, &nu, 512, exec).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let spec = EnsembleSpec::new(EnsembleKind::Gue, 100);
    let mut group = c.benchmark_group("gue_norms");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                map_indexed(exec, 16, |i| operator_norm(&sample(&spec, Seed::new(1, i as u64)).unwrap()).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, convolution, monte_carlo);
criterion_main!(benches);
