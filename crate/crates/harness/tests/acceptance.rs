//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Experiments use the configs shipped in `configs/`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use strongfree_core::freelimit::{
    akemann_ostrand_norm, arcsine_cdf, free_add_convolve, free_haar_trace, kolmogorov_to_cdf, lehner_norm,
    CompactMeasure,
};
use strongfree_core::ncalg::{Coefficient, StarLetter, StarMonomial};
use strongfree_core::{c64, Seed};
use strongfree_harness::report::Rule;
use strongfree_harness::{run_experiment, ConvergenceReport, ExperimentConfig};

macro_rules! config {
    ($name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/", $name, ".toml"))
    };
}

/// Runs a config once; criteria sharing a config share the report.
fn run(text: &str) -> ConvergenceReport {
    static CACHE: Mutex<BTreeMap<String, ConvergenceReport>> = Mutex::new(BTreeMap::new());
    if let Some(r) = CACHE.lock().unwrap().get(text) {
        return r.clone();
    }
    let mut cfg = ExperimentConfig::from_toml(text).expect("config parses");
    cfg.experiment.output = None;
    let report = run_experiment(&cfg).expect("experiment runs");
    CACHE.lock().unwrap().insert(text.to_string(), report.clone());
    report
}

fn largest(report: &ConvergenceReport) -> usize {
    *report.config.grid.n.last().unwrap()
}

/// Value of a judged statistic and whether its rule held.
fn stat(report: &ConvergenceReport, name: &str) -> (f64, bool) {
    let s = report.statistic(name).unwrap_or_else(|| panic!("statistic {name}"));
    (s.value.unwrap_or(f64::NAN), s.pass)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn norm_criterion(text: &str, band: f64) -> Outcome {
    let r = run(text);
    let (dev, _) = stat(&r, "norm");
    let agg = r.aggregate("norm", largest(&r)).unwrap();
    let trend = r.slopes.first().map_or(String::new(), |s| {
        format!(", slope {:.2}{}", s.slope, if s.monotone { "" } else { " (non-monotone)" })
    });
    outcome(
        r.passed() && dev <= band,
        format!(
            "N={} median norm {:.4}, oracle {:.4}, median |dev| {:.4} <= {band}{trend}",
            agg.dimension,
            agg.median,
            agg.oracle.unwrap(),
            dev
        ),
    )
}

fn c1() -> Outcome {
    let r = run(config!("gue_norm"));
    let agg = r.aggregate("norm", 2000).expect("N=2000 in grid");
    let ok = r.config.seeds.count == 5 && (1.9..=2.1).contains(&agg.median);
    outcome(ok, format!("N=2000, 5 seeds: median ||X_N|| = {:.4} in [1.9, 2.1]", agg.median))
}

fn c6() -> Outcome {
    let mut rng = Seed::new(606, 0).rng();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = rng.random_range(2..=4);
        let a: Vec<f64> = (0..p).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mut coeffs = vec![Coefficient::scalar(c64::new(0.0, 0.0))];
        coeffs.extend(a.iter().map(|&x| Coefficient::scalar(c64::new(x, 0.0))));
        let l = lehner_norm(&coeffs).unwrap();
        let ao = akemann_ostrand_norm(&a.iter().map(|&x| c64::new(x, 0.0)).collect::<Vec<_>>()).unwrap();
        worst = worst.max((l - ao).abs());
    }
    let id = Coefficient::scaled_identity(2, c64::new(1.0, 0.0));
    let zero = Coefficient::scaled_identity(2, c64::new(0.0, 0.0));
    let block = lehner_norm(&[zero, id.clone(), id.clone(), id]).unwrap();
    let block_dev = (block - 2.0 * 2f64.sqrt()).abs();
    outcome(
        worst <= 1e-5 && block_dev <= 1e-4,
        format!("scalar vs Akemann-Ostrand max |diff| {worst:.2e} <= 1e-5 (20 sets); k=2 identity |dev| {block_dev:.2e} <= 1e-4"),
    )
}

fn c7() -> Outcome {
    let b = CompactMeasure::atomic(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
    let analytic = kolmogorov_to_cdf(&free_add_convolve(&b, &b).unwrap(), arcsine_cdf);
    let r = run(config!("bernoulli_sum"));
    let (ks, _) = stat(&r, "ks");
    outcome(
        analytic <= 1e-3 && ks <= 0.05,
        format!("analytic sup|F - arcsine| {analytic:.2e} <= 1e-3; N=1000 median KS {ks:.4} <= 0.05"),
    )
}

fn c8() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (branch, text) in [("add", config!("bernoulli_sum")), ("mult", config!("product_projection"))] {
        let r = run(text);
        let (frac, pass) = stat(&r, "support");
        let n_seeds = r.config.seeds.count;
        ok &= pass && frac >= 0.95 && n_seeds == 40 && largest(&r) == 1000 && r.config.experiment.epsilon == 0.1;
        lines.push(format!("{branch} {:.0}% of {n_seeds}", 100.0 * frac));
    }
    outcome(ok, format!("eps=0.1, N=1000, inside neighborhood: {}", lines.join(", ")))
}

fn c9() -> Outcome {
    let r = run(config!("compression"));
    let (ks, _) = stat(&r, "ks");
    let cross = run(config!("product_projection"));
    let (cross_ks, _) = stat(&cross, "compression_ks");
    outcome(
        largest(&r) == 2000 && ks <= 0.03 && cross_ks <= 0.03,
        format!("corner N=2000 median KS {ks:.4} <= 0.03; product branch vs compression N=1000 median KS {cross_ks:.4}"),
    )
}

fn c10() -> Outcome {
    let r = run(config!("coupling"));
    let trials = r.aggregate("reconstruction", 300).map_or(0, |a| a.count);
    let failures: Vec<String> = ["coupling_spectrum", "coupling_agreement", "reconstruction"]
        .iter()
        .map(|s| format!("{s} {}", stat(&r, s).0))
        .collect();
    let worst = |s: &str| {
        r.records
            .iter()
            .filter(|t| t.statistic == s)
            .map(|t| t.measured)
            .fold(0.0, f64::max)
    };
    outcome(
        r.passed() && trials == 100,
        format!(
            "{trials} trials at N=300, failures: {}; worst spectrum err {:.1e}, worst residual {:.1e}",
            failures.join(", "),
            worst("coupling_spectrum"),
            worst("reconstruction")
        ),
    )
}

/// Free-group reduction by repeated scanning for an adjacent cancelling pair.
fn reduce_by_scanning(w: &[StarLetter]) -> Vec<StarLetter> {
    let mut v = w.to_vec();
    while let Some(i) = v
        .windows(2)
        .position(|p| p[0].index == p[1].index && p[0].starred != p[1].starred)
    {
        v.drain(i..i + 2);
    }
    v
}

fn c11() -> Outcome {
    let r = run(config!("commutator_trace"));
    let (dev, _) = stat(&r, "trace_deviation");
    let alphabet = [
        StarLetter::plain(1),
        StarLetter::star(1),
        StarLetter::plain(2),
        StarLetter::star(2),
    ];
    let mut words: Vec<Vec<StarLetter>> = vec![vec![]];
    let mut frontier = words.clone();
    for _ in 0..6 {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |l| {
                    let mut next = w.clone();
                    next.push(*l);
                    next
                })
            })
            .collect();
        words.extend(frontier.iter().cloned());
    }
    let mismatches = words
        .iter()
        .filter(|w| {
            let expected = if reduce_by_scanning(w).is_empty() { 1.0 } else { 0.0 };
            free_haar_trace(&StarMonomial::new(w.to_vec())) != expected
        })
        .count();
    outcome(
        dev <= 0.1 && mismatches == 0,
        format!(
            "commutator N=1000 median |tau_N| {dev:.4} <= 0.1; {} words up to length 6, {mismatches} mismatches",
            words.len()
        ),
    )
}

fn c12() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for text in [config!("haagerup_d1"), config!("haagerup_d2")] {
        let r = run(text);
        let (failures, pass) = stat(&r, "norm");
        let worst = r
            .records
            .iter()
            .map(|t| t.measured - t.oracle.unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        ok &= pass && largest(&r) == 1000;
        parts.push(format!(
            "d={} {failures} failures (max norm - bound {worst:.3})",
            r.config.polynomial.degree.unwrap()
        ));
    }
    outcome(ok, format!("N=1000, slack 0.05: {}", parts.join("; ")))
}

fn c13() -> Outcome {
    let r = run(config!("permutation"));
    let worst_top = r
        .records
        .iter()
        .filter(|t| t.statistic == "top")
        .map(|t| (t.measured - 4.0).abs())
        .fold(0.0, f64::max);
    let (_, top_ok) = stat(&r, "top");
    let (_, contrast_ok) = stat(&r, "contrast");
    let haar = r.aggregate("haar_norm", largest(&r)).unwrap().median;
    outcome(
        top_ok && contrast_ok,
        format!("top eigenvalue max |λ - 4| {worst_top:.1e} <= 1e-9 in all trials; Haar median norm {haar:.4} < 4"),
    )
}

fn c14() -> Outcome {
    let r = run(config!("haar_invariance"));
    let parts: Vec<String> = ["trace_re", "trace_im", "trace_sq", "independence"]
        .iter()
        .map(|s| format!("{s} {:.2}se", stat(&r, s).0))
        .collect();
    let rules_ok = r.statistics.iter().all(|s| s.rule == Rule::MeanWithinStdErr { multiple: 3.0 });
    let samples = r.aggregate("trace_sq", 100).map_or(0, |a| a.count);
    outcome(
        r.passed() && rules_ok && samples == 10_000,
        format!("{samples} samples at N=100: {}", parts.join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 GUE norm", Box::new(c1)),
        ("2 sum of Haar unitaries", Box::new(|| norm_criterion(config!("pisier"), 0.1))),
        ("3 Kesten sum", Box::new(|| norm_criterion(config!("kesten"), 0.1))),
        ("4 Fell absorption", Box::new(|| norm_criterion(config!("fell"), 0.15))),
        ("5 weighted Akemann-Ostrand", Box::new(|| norm_criterion(config!("weighted"), 0.2))),
        ("6 Lehner consistency", Box::new(c6)),
        ("7 free additive convolution", Box::new(c7)),
        ("8 support containment", Box::new(c8)),
        ("9 compression", Box::new(c9)),
        ("10 exact coupling identities", Box::new(c10)),
        ("11 free Haar trace", Box::new(c11)),
        ("12 Haagerup bound", Box::new(c12)),
        ("13 permutation contrast", Box::new(c13)),
        ("14 Haar invariance", Box::new(c14)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.0}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
