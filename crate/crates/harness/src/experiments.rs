//! The experiment runners. Each trial is keyed by (N, seed) and returns a
//! handful of named statistics; trials run through [`map_indexed`] and are
//! collected in grid order.

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use strongfree_core::ensembles::{conjugate_by_haar, sample, EnsembleSpec};
use strongfree_core::freelimit::{
    free_add_convolve, free_compression, free_haar_trace, free_mult_convolve, haagerup_bound, kemp_speicher_bound,
    kesten_norm, kolmogorov_to_empirical, measure_support,
};
use strongfree_core::ncalg::{reduced_words, NcPolynomial, StarMonomial};
use strongfree_core::par::map_indexed;
use strongfree_core::spectral::{
    coupling_reference, eig_hermitian, empirical_cdf, functional_calculus, haar_reconstruction_check,
    hermitian_eigenvalues, operator_norm, quantile_identity_drift,
};
use strongfree_core::{c64, CompactMeasure, EnsembleKind, Execution, MatrixFlags, Seed, SquareMatrix, SupportSet};

use crate::config::{Branch, ExperimentConfig, ExperimentKind};
use crate::error::{HarnessError, Result};
use crate::measure_spec::{as_complex, quantile_diagonal, quantile_spectrum, MeasureSpec};
use crate::oracle::norm_oracle;
use crate::report::{ConvergenceReport, Rule, StatisticRule, TrialRecord};

/// Exactness threshold for the spectrum of F_A(A).
pub const COUPLING_SPECTRUM_TOL: f64 = 1e-10;
/// Exactness threshold for the Haar reconstruction residual.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Exactness threshold for the top eigenvalue of a permutation sum.
pub const TOP_EIGENVALUE_TOL: f64 = 1e-9;
/// Relative distance under which an eigenvalue is identified with an atom of
/// the limit law.
const ATOM_SNAP: f64 = 1e-9;
/// Relative eigenvalue gap below which an eigenbasis is not identifiable.
const DEGENERACY_TOL: f64 = 1e-12;

struct Stat {
    name: &'static str,
    measured: f64,
    oracle: Option<f64>,
    pass: bool,
}

impl Stat {
    fn new(name: &'static str, measured: f64, oracle: Option<f64>, pass: bool) -> Self {
        Self {
            name,
            measured,
            oracle,
            pass,
        }
    }

    /// |measured − oracle| ≤ tolerance.
    fn near(name: &'static str, measured: f64, oracle: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Some(oracle), (measured - oracle).abs() <= tolerance)
    }

    /// measured ≤ bound + slack.
    fn below(name: &'static str, measured: f64, bound: f64, slack: f64) -> Self {
        Self::new(name, measured, Some(bound), measured <= bound + slack)
    }

    fn info(name: &'static str, measured: f64, oracle: Option<f64>) -> Self {
        Self::new(name, measured, oracle, true)
    }
}

enum Outcome {
    Stats(Vec<Stat>),
    Skipped(String),
}

fn run_trials<F>(cfg: &ExperimentConfig, exec: Execution, trial: F) -> Result<(Vec<TrialRecord>, Vec<String>)>
where
    F: Fn(usize, Seed) -> Result<Outcome> + Sync + Send,
{
    let seeds = cfg.seeds();
    let tasks: Vec<(usize, Seed)> = cfg
        .grid
        .n
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    let results = map_indexed(exec, tasks.len(), |i| {
        let (n, seed) = tasks[i];
        let start = Instant::now();
        trial(n, seed).map(|o| (o, start.elapsed().as_secs_f64()))
    });
    let mut records = Vec::new();
    let mut notices: Vec<String> = Vec::new();
    for (&(n, seed), result) in tasks.iter().zip(results) {
        match result? {
            (Outcome::Stats(stats), wall) => records.extend(stats.into_iter().map(|s| TrialRecord {
                statistic: s.name.to_string(),
                dimension: n,
                seed_master: seed.master,
                seed_stream: seed.stream_index,
                measured: s.measured,
                oracle: s.oracle,
                pass: s.pass,
                wall_seconds: wall,
            })),
            (Outcome::Skipped(why), _) => {
                if !notices.contains(&why) {
                    notices.push(why);
                }
            }
        }
    }
    Ok((records, notices))
}

fn letters(kind: EnsembleKind, p: usize, n: usize, seed: Seed) -> Result<Vec<SquareMatrix>> {
    let spec = EnsembleSpec::new(kind, n);
    (0..p)
        .map(|i| sample(&spec, seed.derive(i as u64)).map_err(HarnessError::from))
        .collect()
}

fn hermitian(m: SquareMatrix) -> SquareMatrix {
    m.hermitian_part().with_flags(MatrixFlags::HERMITIAN)
}

/// Moves eigenvalues within a relative `ATOM_SNAP` of an atom of `limit` onto
/// the atom, so that rounding does not split an atom across its location.
fn snap_to_atoms(eigs: &mut [f64], limit: &CompactMeasure) {
    let scale = eigs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for x in eigs.iter_mut() {
        if let Some(a) = limit.atoms().iter().find(|a| (*x - a.location).abs() <= ATOM_SNAP * scale) {
            *x = a.location;
        }
    }
}

fn support_distance(eigs: &[f64], support: &SupportSet) -> f64 {
    eigs.iter().map(|&x| support.distance(x)).fold(0.0, f64::max)
}

/// Coefficients over a word set: `ones` (default), `random` (standard normal,
/// drawn from the master seed) or `e1` (first word only).
fn alpha(cfg: &ExperimentConfig, count: usize) -> Result<Vec<c64>> {
    match cfg.polynomial.alpha.as_deref().unwrap_or("ones") {
        "ones" => Ok(vec![c64::new(1.0, 0.0); count]),
        "e1" => Ok((0..count).map(|i| c64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)).collect()),
        "random" => {
            let mut rng = Seed::new(cfg.seeds.master, u64::MAX).rng();
            Ok((0..count).map(|_| c64::new(rng.sample(StandardNormal), 0.0)).collect())
        }
        other => Err(HarnessError::Config(format!("unknown alpha {other:?}"))),
    }
}

fn word_sum(p: usize, words: &[StarMonomial], alpha: &[c64]) -> Result<NcPolynomial> {
    let terms = alpha
        .iter()
        .zip(words)
        .filter(|(a, _)| **a != c64::new(0.0, 0.0))
        .map(|(a, w)| (*a, w.clone()));
    Ok(NcPolynomial::from_scalar_terms(p, terms)?)
}

fn degree(cfg: &ExperimentConfig) -> Result<usize> {
    cfg.polynomial
        .degree
        .ok_or_else(|| HarnessError::Config("missing [polynomial] degree".into()))
}

fn haar_kind(cfg: &ExperimentConfig) -> Result<EnsembleKind> {
    let kind = cfg.ensemble_kind(EnsembleKind::HaarUnitary);
    match kind {
        EnsembleKind::HaarUnitary | EnsembleKind::HaarOrthogonal | EnsembleKind::HaarSymplectic => Ok(kind),
        other => Err(HarnessError::Config(format!("{other} is not a Haar ensemble"))),
    }
}

/// ‖P(X)‖ against the closed-form limit; fails before sampling when the
/// polynomial has no oracle.
pub fn run_norm_convergence(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let poly = cfg.polynomial()?;
    let kind = cfg.ensemble_kind(EnsembleKind::HaarUnitary);
    let oracle = norm_oracle(&poly, kind)?;
    let tol = cfg.experiment.tolerance;
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let x = letters(kind, poly.alphabet_size(), n, seed)?;
        let norm = operator_norm(&poly.evaluate(&x)?)?;
        Ok(Outcome::Stats(vec![Stat::near("norm", norm, oracle.value, tol)]))
    })?;
    let rules = vec![StatisticRule::new("norm", Rule::MedianAbsDeviation { tolerance: tol })];
    let mut report = ConvergenceReport::new(cfg.clone(), records, rules, notices);
    report.notices.push(format!("oracle {} = {}", oracle.kind, oracle.value));
    Ok(report)
}

/// τ_N of a single Haar word against its free-group trace.
pub fn run_trace_convergence(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let poly = cfg.polynomial()?;
    let mut terms = poly.terms();
    let (word, coeff) = match (terms.next(), terms.next()) {
        (Some((w, c)), None) => (w.clone(), c.as_scalar()),
        _ => return Err(HarnessError::Config("trace_convergence needs a single word".into())),
    };
    let coeff = coeff.ok_or_else(|| HarnessError::Config("trace_convergence needs a scalar coefficient".into()))?;
    let kind = haar_kind(cfg)?;
    let limit = coeff * free_haar_trace(&word);
    let tol = cfg.experiment.tolerance;
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let x = letters(kind, poly.alphabet_size(), n, seed)?;
        let tau = poly.evaluate(&x)?.normalized_trace();
        let dev = (tau - limit).norm();
        Ok(Outcome::Stats(vec![
            Stat::near("trace_deviation", dev, 0.0, tol),
            Stat::info("trace_re", tau.re, Some(limit.re)),
            Stat::info("trace_im", tau.im, Some(limit.im)),
        ]))
    })?;
    let rules = vec![
        StatisticRule::new("trace_deviation", Rule::MedianAbsDeviation { tolerance: tol }),
        StatisticRule::new("trace_re", Rule::Info),
        StatisticRule::new("trace_im", Rule::Info),
    ];
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// Spectrum of A + B or B^{1/2} A B^{1/2}: A the quantile diagonal of μ, B a
/// Haar rotation of the quantile diagonal of ν. Checks support containment
/// and the Kolmogorov distance to μ ⊞ ν or μ ⊠ ν; with `t` set on the
/// product branch also the distance to the compression μ^(t).
pub fn run_sum_product_spectrum(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let mu = cfg.measure("mu")?.build()?;
    let nu = cfg.measure("nu")?.build()?;
    let branch = cfg.spectra.branch;
    let limit = match branch {
        Branch::Add => free_add_convolve(&mu, &nu)?,
        Branch::Mult => free_mult_convolve(&mu, &nu)?,
    };
    let support = measure_support(&limit, cfg.spectra.density_threshold)?;
    let compression = match (branch, cfg.spectra.t) {
        (Branch::Mult, Some(t)) => Some(free_compression(&mu, t)?),
        (Branch::Add, Some(_)) => return Err(HarnessError::Config("t applies to the mult branch only".into())),
        _ => None,
    };
    let (tol, eps) = (cfg.experiment.tolerance, cfg.experiment.epsilon);
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let a = quantile_diagonal(&mu, n)?;
        let b = quantile_spectrum(&nu, n);
        let m = match branch {
            Branch::Add => hermitian(a.add(&conjugate_by_haar(&as_complex(&b), seed)?)?),
            Branch::Mult => {
                let root: Vec<f64> = b.iter().map(|x| x.max(0.0).sqrt()).collect();
                let h = conjugate_by_haar(&as_complex(&root), seed)?;
                hermitian(h.matmul(&a)?.matmul(&h)?)
            }
        };
        let mut eigs = hermitian_eigenvalues(&m)?;
        snap_to_atoms(&mut eigs, &limit);
        let inside = strongfree_core::spectral::support_neighborhood_check(&eigs, &support, eps)?;
        let mut stats = vec![
            Stat::new("support", support_distance(&eigs, &support), Some(0.0), inside),
            Stat::near("ks", kolmogorov_to_empirical(&eigs, &limit), 0.0, tol),
        ];
        if let Some(c) = &compression {
            let mut e = eigs.clone();
            snap_to_atoms(&mut e, c);
            stats.push(Stat::near("compression_ks", kolmogorov_to_empirical(&e, c), 0.0, tol));
        }
        Ok(Outcome::Stats(stats))
    })?;
    let mut rules = vec![
        StatisticRule::new("support", Rule::PassFraction { minimum: 0.95 }),
        StatisticRule::new("ks", Rule::MedianAbsDeviation { tolerance: tol }),
    ];
    if compression.is_some() {
        rules.push(StatisticRule::new("compression_ks", Rule::MedianAbsDeviation { tolerance: tol }));
    }
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// Corner Π A Π of a Haar-rotated quantile diagonal of μ, Π of rank ⌊tN⌉,
/// against the compression μ^(t).
pub fn run_compression_spectrum(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let mu = cfg.measure("mu")?.build()?;
    let t = cfg
        .spectra
        .t
        .ok_or_else(|| HarnessError::Config("missing [spectra] t".into()))?;
    let limit = free_compression(&mu, t)?;
    let support = measure_support(&limit, cfg.spectra.density_threshold)?;
    let (tol, eps) = (cfg.experiment.tolerance, cfg.experiment.epsilon);
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let a = conjugate_by_haar(&as_complex(&quantile_spectrum(&mu, n)), seed)?;
        let rank = ((t * n as f64).round() as usize).clamp(1, n);
        let corner = hermitian(a.leading_block(rank)?);
        let mut eigs = hermitian_eigenvalues(&corner)?;
        eigs.resize(n, 0.0);
        eigs.sort_by(f64::total_cmp);
        snap_to_atoms(&mut eigs, &limit);
        let inside = strongfree_core::spectral::support_neighborhood_check(&eigs, &support, eps)?;
        Ok(Outcome::Stats(vec![
            Stat::near("ks", kolmogorov_to_empirical(&eigs, &limit), 0.0, tol),
            Stat::new("support", support_distance(&eigs, &support), Some(0.0), inside),
        ]))
    })?;
    let rules = vec![
        StatisticRule::new("ks", Rule::MedianAbsDeviation { tolerance: tol }),
        StatisticRule::new("support", Rule::PassFraction { minimum: 0.95 }),
    ];
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// ‖Σ αₙ Pₙ(U)‖ over words of length d against (d + 1)‖α‖₂, with the
/// experiment tolerance as slack.
pub fn run_haagerup_check(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let p = cfg.p()?;
    let d = degree(cfg)?;
    let kind = haar_kind(cfg)?;
    let words = reduced_words(p, d, cfg.polynomial.holomorphic)?;
    let alpha = alpha(cfg, words.len())?;
    let poly = word_sum(p, &words, &alpha)?;
    let bound = haagerup_bound(d, &alpha)?;
    let slack = cfg.experiment.tolerance;
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let u = letters(kind, p, n, seed)?;
        let norm = operator_norm(&poly.evaluate(&u)?)?;
        Ok(Outcome::Stats(vec![Stat::below("norm", norm, bound, slack)]))
    })?;
    let rules = vec![StatisticRule::new("norm", Rule::AllTrials)];
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// ‖Σ αₙ Pₙ(A)‖ with A_j = U_j Y V_j* against e√(d+1)·‖Σ αₙ Pₙ(A)‖₂ over
/// holomorphic words of length d.
pub fn run_rdiagonal_check(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let p = cfg.p()?;
    let d = degree(cfg)?;
    let specs: Vec<MeasureSpec> = cfg
        .ensemble
        .constants
        .iter()
        .map(|s| MeasureSpec::parse(s))
        .collect::<Result<_>>()?;
    let first = specs
        .first()
        .ok_or_else(|| HarnessError::Config("missing [ensemble] constants".into()))?;
    if specs.iter().any(|s| s != first) || !(specs.len() == 1 || specs.len() == p) {
        return Err(HarnessError::Config(
            "rdiagonal_check needs identically distributed Y_j (one spec, or p equal specs)".into(),
        ));
    }
    let y_law = first.build()?;
    let words = reduced_words(p, d, true)?;
    let alpha = alpha(cfg, words.len())?;
    let poly = word_sum(p, &words, &alpha)?;
    let slack = cfg.experiment.tolerance;
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let y = quantile_diagonal(&y_law, n)?;
        let spec = EnsembleSpec::new(EnsembleKind::HaarUnitary, n);
        let a = (0..p)
            .map(|j| {
                let u = sample(&spec, seed.derive(2 * j as u64))?;
                let v = sample(&spec, seed.derive(2 * j as u64 + 1))?;
                u.matmul(&y)?.matmul(&v.adjoint())
            })
            .collect::<strongfree_core::Result<Vec<_>>>()?;
        let x = poly.evaluate(&a)?;
        let l2 = (x.as_mat().norm_l2().powi(2) / n as f64).sqrt();
        let norm = operator_norm(&x)?;
        let bound = kemp_speicher_bound(d, l2)?;
        Ok(Outcome::Stats(vec![
            Stat::below("norm", norm, bound, slack),
            Stat::info("l2", l2, None),
        ]))
    })?;
    let rules = vec![StatisticRule::new("norm", Rule::AllTrials), StatisticRule::new("l2", Rule::Info)];
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// Σ(Sᵢ + Sᵢ*) for random permutations: top eigenvalue exactly 2p, second
/// eigenvalue against 2√(2p − 1) (informational), and the Haar version of
/// the same polynomial against the Kesten norm.
pub fn run_permutation_contrast(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let p = cfg.p()?;
    if p < 2 {
        return Err(HarnessError::Config("permutation_contrast needs p >= 2".into()));
    }
    let terms: Vec<String> = (1..=p).map(|i| format!("x{i} + x{i}'")).collect();
    let poly: NcPolynomial = terms.join(" + ").parse()?;
    let top_oracle = 2.0 * p as f64;
    let second_oracle = 2.0 * ((2 * p - 1) as f64).sqrt();
    let kesten = kesten_norm(p)?;
    let tol = cfg.experiment.tolerance;
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let s = letters(EnsembleKind::Permutation, p, n, seed.derive(0))?;
        let eigs = hermitian_eigenvalues(&poly.evaluate(&s)?)?;
        let top = eigs[n - 1];
        let second = if n > 1 { eigs[n - 2] } else { f64::NAN };
        let u = letters(EnsembleKind::HaarUnitary, p, n, seed.derive(1))?;
        let haar = operator_norm(&poly.evaluate(&u)?)?;
        Ok(Outcome::Stats(vec![
            Stat::near("top", top, top_oracle, TOP_EIGENVALUE_TOL),
            Stat::info("second", second, Some(second_oracle)),
            Stat::near("haar_norm", haar, kesten, tol),
            Stat::new("contrast", top - haar, Some(top_oracle - kesten), top > haar),
        ]))
    })?;
    let rules = vec![
        StatisticRule::new("top", Rule::AllTrials),
        StatisticRule::new("second", Rule::Info),
        StatisticRule::new("haar_norm", Rule::MedianAbsDeviation { tolerance: tol }),
        StatisticRule::new("contrast", Rule::AllTrials),
    ];
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// Exact coupling identities per trial: F_A(A) for a GUE matrix A has
/// spectrum {i/N} and agrees with the reference construction; a Haar
/// unitary is rebuilt from its argument quantiles. The quantile drift is
/// required to decrease along the grid when the grid has several points.
pub fn run_coupling_identity(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let a = sample(&EnsembleSpec::new(EnsembleKind::Gue, n), seed.derive(0))?;
        let d = eig_hermitian(&a)?;
        let f = empirical_cdf(&d.real_eigenvalues())?;
        let direct = functional_calculus(&d, |z| c64::new(f.evaluate(z.re), 0.0))?;
        let spec = hermitian_eigenvalues(&direct)?;
        let spectrum_err = spec
            .iter()
            .enumerate()
            .map(|(i, x)| (x - (i + 1) as f64 / n as f64).abs())
            .fold(0.0, f64::max);
        let agreement = direct.max_abs_diff(&coupling_reference(&a)?)?;
        let u = sample(&EnsembleSpec::new(EnsembleKind::HaarUnitary, n), seed.derive(1))?;
        let residual = haar_reconstruction_check(&u)?;
        let drift = quantile_identity_drift(&u)?;
        Ok(Outcome::Stats(vec![
            Stat::below("coupling_spectrum", spectrum_err, 0.0, COUPLING_SPECTRUM_TOL),
            Stat::below("coupling_agreement", agreement, 0.0, COUPLING_SPECTRUM_TOL),
            Stat::below("reconstruction", residual, 0.0, RECONSTRUCTION_TOL),
            Stat::info("quantile_drift", drift, Some(0.0)),
        ]))
    })?;
    let drift_rule = if cfg.grid.n.len() > 1 { Rule::MedianDecreasing } else { Rule::Info };
    let rules = vec![
        StatisticRule::new("coupling_spectrum", Rule::AllTrials),
        StatisticRule::new("coupling_agreement", Rule::AllTrials),
        StatisticRule::new("reconstruction", Rule::AllTrials),
        StatisticRule::new("quantile_drift", drift_rule),
    ];
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

/// Haar moment tests on the eigenbasis V of V₀ diag(data) V₀*, with phases
/// randomized: τ_N(V) has mean 0, |Tr V|² has mean 1, and
/// (|Tr V|² − 1)(mean(data) − ½) has mean 0 when V is independent of the
/// data. Data are uniform on [0, 1] unless `[ensemble] constants` names a
/// spectrum; a degenerate spectrum skips the trial.
pub fn run_haar_invariance(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    let fixed = match cfg.ensemble.constants.first() {
        Some(s) => Some(MeasureSpec::parse(s)?.build()?),
        None => None,
    };
    let k = 3.0;
    let (records, notices) = run_trials(cfg, exec, |n, seed| {
        let data: Vec<f64> = match &fixed {
            Some(mu) => quantile_spectrum(mu, n),
            None => {
                let mut rng = seed.derive(0).rng();
                (0..n).map(|_| rng.random::<f64>()).collect()
            }
        };
        let m = conjugate_by_haar(&as_complex(&data), seed.derive(1))?;
        let d = eig_hermitian(&m)?;
        let scale = data.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        if d.min_gap().is_none_or(|(_, gap)| gap <= DEGENERACY_TOL * scale) {
            return Ok(Outcome::Skipped(
                "degenerate spectrum: eigenbasis not identifiable, trial skipped".into(),
            ));
        }
        let v = d.with_random_phases(seed.derive(2));
        let tr = v.basis().trace();
        let mean_data = data.iter().sum::<f64>() / n as f64;
        let sq = tr.norm_sqr();
        Ok(Outcome::Stats(vec![
            Stat::info("trace_re", tr.re / n as f64, Some(0.0)),
            Stat::info("trace_im", tr.im / n as f64, Some(0.0)),
            Stat::info("trace_sq", sq, Some(1.0)),
            Stat::info("independence", (sq - 1.0) * (mean_data - 0.5), Some(0.0)),
        ]))
    })?;
    let rules = ["trace_re", "trace_im", "trace_sq", "independence"]
        .into_iter()
        .map(|s| StatisticRule::new(s, Rule::MeanWithinStdErr { multiple: k }))
        .collect();
    Ok(ConvergenceReport::new(cfg.clone(), records, rules, notices))
}

pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Execution) -> Result<ConvergenceReport> {
    cfg.validate()?;
    match cfg.experiment.kind {
        ExperimentKind::NormConvergence => run_norm_convergence(cfg, exec),
        ExperimentKind::TraceConvergence => run_trace_convergence(cfg, exec),
        ExperimentKind::SumProductSpectrum => run_sum_product_spectrum(cfg, exec),
        ExperimentKind::CompressionSpectrum => run_compression_spectrum(cfg, exec),
        ExperimentKind::HaagerupCheck => run_haagerup_check(cfg, exec),
        ExperimentKind::RdiagonalCheck => run_rdiagonal_check(cfg, exec),
        ExperimentKind::PermutationContrast => run_permutation_contrast(cfg, exec),
        ExperimentKind::CouplingIdentity => run_coupling_identity(cfg, exec),
        ExperimentKind::HaarInvariance => run_haar_invariance(cfg, exec),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    run_experiment_with(cfg, Execution::default())
}
