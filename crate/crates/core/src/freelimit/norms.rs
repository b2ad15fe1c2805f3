//! Closed-form and variational norms of sums of free Haar unitaries, and the
//! norm inequalities for words of bounded length.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::goldensectionsearch::GoldenSectionSearch;
use argmin::solver::neldermead::NelderMead;
use faer::{c64, Mat, Side};
use rand::Rng;

use crate::ensembles::conjugate_diagonal;
use crate::error::{Error, Result};
use crate::ncalg::Coefficient;
use crate::rng::Seed;

/// Tolerance of the one-dimensional minimization.
pub const AO_TOL: f64 = 1e-12;
/// Random restarts of the matrix-valued minimization.
pub const LEHNER_RESTARTS: usize = 8;

/// t ↦ 2t + Σ(√(t² + |aᵢ|²) − t).
pub fn akemann_ostrand_objective(moduli: &[f64], t: f64) -> f64 {
    2.0 * t + moduli.iter().map(|&a| a * a / ((t * t + a * a).sqrt() + t)).sum::<f64>()
}

struct AoCost(Vec<f64>);

impl CostFunction for AoCost {
    type Param = f64;
    type Output = f64;

    fn cost(&self, t: &f64) -> std::result::Result<f64, ArgminError> {
        Ok(akemann_ostrand_objective(&self.0, *t))
    }
}

/// ‖Σ aᵢuᵢ‖ for free Haar unitaries uᵢ, by minimizing the convex objective
/// over t ∈ [0, p·max|aᵢ|].
pub fn akemann_ostrand_norm(a: &[c64]) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyData);
    }
    let moduli: Vec<f64> = a.iter().map(|z| z.norm()).collect();
    let hi = moduli.iter().copied().fold(0.0, f64::max) * a.len() as f64;
    if hi == 0.0 {
        return Ok(0.0);
    }
    let solver = GoldenSectionSearch::new(0.0, hi)
        .and_then(|s| s.with_tolerance(AO_TOL))
        .map_err(|_| Error::OptimizerFailed { restarts: 0 })?;
    let res = Executor::new(AoCost(moduli.clone()), solver)
        .configure(|s| s.param(0.5 * hi).max_iters(500))
        .run()
        .map_err(|_| Error::OptimizerFailed { restarts: 0 })?;
    let t = *res.state().get_best_param().ok_or(Error::OptimizerFailed { restarts: 0 })?;
    // The minimizer may sit at the left end of the bracket.
    Ok(akemann_ostrand_objective(&moduli, t).min(akemann_ostrand_objective(&moduli, 0.0)))
}

/// ‖Σᵢ(uᵢ + uᵢ*)‖ = 2√(2p − 1).
pub fn kesten_norm(p: usize) -> Result<f64> {
    if p < 1 {
        return Err(Error::OutOfDomain {
            value: p as f64,
            domain: "p >= 1",
        });
    }
    Ok(2.0 * ((2 * p - 1) as f64).sqrt())
}

/// ‖Σ aᵢ ⊗ uᵢ‖ = 2√(p − 1) for unitary coefficients.
pub fn fell_norm(p: usize) -> Result<f64> {
    if p < 2 {
        return Err(Error::OutOfDomain {
            value: p as f64,
            domain: "p >= 2",
        });
    }
    Ok(2.0 * ((p - 1) as f64).sqrt())
}

/// (d + 1)‖α‖₂.
pub fn haagerup_bound(d: usize, alpha: &[c64]) -> Result<f64> {
    if d < 1 {
        return Err(Error::OutOfDomain {
            value: d as f64,
            domain: "d >= 1",
        });
    }
    Ok((d + 1) as f64 * crate::ncalg::l2_coefficient_norm(alpha))
}

/// e·√(d + 1)·l2.
pub fn kemp_speicher_bound(d: usize, l2: f64) -> Result<f64> {
    if d < 1 {
        return Err(Error::OutOfDomain {
            value: d as f64,
            domain: "d >= 1",
        });
    }
    if !(l2 >= 0.0) {
        return Err(Error::OutOfDomain {
            value: l2,
            domain: "l2 >= 0",
        });
    }
    Ok(std::f64::consts::E * ((d + 1) as f64).sqrt() * l2)
}

fn to_mat(c: &Coefficient) -> Mat<c64> {
    let k = c.dim();
    Mat::from_fn(k, k, |i, j| c.get(i, j))
}

/// f(H) for Hermitian H by spectral calculus.
fn hermitian_apply(h: &Mat<c64>, f: impl Fn(f64) -> f64) -> Option<Mat<c64>> {
    let sym = Mat::from_fn(h.nrows(), h.ncols(), |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let evd = sym.self_adjoint_eigen(Side::Lower).ok()?;
    let s = evd.S().column_vector();
    let d: Vec<c64> = (0..h.nrows()).map(|i| c64::new(f(s[i].re), 0.0)).collect();
    if d.iter().any(|z| !z.re.is_finite()) {
        return None;
    }
    Some(conjugate_diagonal(&evd.U().to_owned(), &d))
}

fn lambda_max(h: &Mat<c64>) -> Option<f64> {
    let sym = Mat::from_fn(h.nrows(), h.ncols(), |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let s = sym.self_adjoint_eigenvalues(Side::Lower).ok()?;
    s.into_iter().reduce(f64::max)
}

/// Lehner's variational expression for ‖a₀ ⊗ 1 + Σᵢ aᵢ ⊗ uᵢ‖ with Hermitian
/// coefficients:
///
/// ```text
/// inf_{b > 0} λ_max( 2b + Σ_{i=0}^{p} b^{1/2} ((1 + cᵢ²)^{1/2} − 1) b^{1/2} ),  cᵢ = b^{−1/2} aᵢ b^{−1/2}
/// ```
///
/// a₀ enters as the coefficient of one more free Haar unitary: left
/// multiplication by 1 ⊗ u₀ maps the operator onto Σ_{i≥0} aᵢ ⊗ u₀uᵢ (with
/// u₀u₀ read as u₀), and u₀, u₀u₁, …, u₀u_p are again free Haar unitaries.
#[derive(Clone)]
struct LehnerCost {
    k: usize,
    coeffs: Vec<Mat<c64>>,
}

impl LehnerCost {
    /// b = LL* with L lower triangular, exp on the diagonal.
    fn b(&self, theta: &[f64]) -> Mat<c64> {
        let k = self.k;
        let mut l = Mat::<c64>::zeros(k, k);
        let mut next = k;
        for i in 0..k {
            l[(i, i)] = c64::new(theta[i].exp(), 0.0);
            for j in 0..i {
                l[(i, j)] = c64::new(theta[next], theta[next + 1]);
                next += 2;
            }
        }
        &l * l.adjoint()
    }

    fn value(&self, theta: &[f64]) -> Option<f64> {
        let b = self.b(theta);
        let half = hermitian_apply(&b, |x| x.max(0.0).sqrt())?;
        let inv_half = hermitian_apply(&b, |x| 1.0 / x.sqrt())?;
        let mut s = Mat::from_fn(self.k, self.k, |i, j| b[(i, j)] * 2.0);
        for a in &self.coeffs {
            let c = &(&inv_half * a) * &inv_half;
            // √(1 + x²) − 1 written without cancellation.
            let f = hermitian_apply(&c, |x| x * x / ((1.0 + x * x).sqrt() + 1.0))?;
            s += &(&half * &f) * &half;
        }
        lambda_max(&s).filter(|v| v.is_finite())
    }
}

impl CostFunction for LehnerCost {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, theta: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        Ok(self.value(theta).unwrap_or(f64::MAX))
    }
}

fn nelder_mead(cost: &LehnerCost, start: Vec<f64>, step: f64) -> Option<(Vec<f64>, f64)> {
    let mut simplex = vec![start.clone()];
    for i in 0..start.len() {
        let mut v = start.clone();
        v[i] += step;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-15).ok()?;
    let res = Executor::new(cost.clone(), solver)
        .configure(|s| s.max_iters(4000))
        .run()
        .ok()?;
    let state = res.state();
    let best = state.get_best_param()?.clone();
    let value = state.get_best_cost();
    value.is_finite().then_some((best, value))
}

fn check_coefficients(coeffs: &[Coefficient]) -> Result<usize> {
    let first = coeffs.first().ok_or(Error::EmptyData)?;
    let k = first.dim();
    for c in coeffs {
        if c.dim() != k {
            return Err(Error::CoefficientMismatch {
                expected: k,
                actual: c.dim(),
            });
        }
        if !c.is_hermitian() {
            return Err(Error::NonHermitianCoefficient);
        }
    }
    Ok(k)
}

/// ‖a₀ ⊗ 1 + Σᵢ aᵢ ⊗ uᵢ‖ for Hermitian k×k coefficients `[a₀, a₁, …, a_p]`
/// and free Haar unitaries uᵢ.
pub fn lehner_norm(coeffs: &[Coefficient]) -> Result<f64> {
    let k = check_coefficients(coeffs)?;
    let cost = LehnerCost {
        k,
        coeffs: coeffs.iter().filter(|c| !c.is_zero()).map(to_mat).collect(),
    };
    if cost.coeffs.is_empty() {
        return Ok(0.0);
    }
    let dim = k * k;
    // Scale of the coefficients, used for the starting point b = t·1.
    let scale = cost
        .coeffs
        .iter()
        .filter_map(lambda_abs_max)
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut rng = Seed::new(0x1e4e, 0).rng();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut failures = 0;
    for r in 0..=LEHNER_RESTARTS {
        let mut start = vec![0.0; dim];
        let log_t = (0.5 * scale).ln();
        for (i, v) in start.iter_mut().enumerate() {
            let noise = if r == 0 { 0.0 } else { rng.random_range(-1.0..1.0) };
            *v = if i < k { log_t + noise } else { noise * scale };
        }
        match nelder_mead(&cost, start, 0.5) {
            Some((p, v)) if best.as_ref().is_none_or(|(_, b)| v < *b) => best = Some((p, v)),
            Some(_) => {}
            None => failures += 1,
        }
    }
    let (p, v) = best.ok_or(Error::OptimizerFailed { restarts: failures })?;
    // Polish from the best point with a small simplex.
    let polished = nelder_mead(&cost, p, 1e-3).map(|(_, v)| v).unwrap_or(v);
    Ok(polished.min(v))
}

fn lambda_abs_max(a: &Mat<c64>) -> Option<f64> {
    let sym = Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let s = sym.self_adjoint_eigenvalues(Side::Lower).ok()?;
    s.into_iter().map(f64::abs).reduce(f64::max)
}

/// Variational value next to a Monte Carlo estimate of the same norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LehnerCrossCheck {
    pub formula: f64,
    pub monte_carlo: f64,
    pub discrepancy: f64,
}

/// Compare [`lehner_norm`] with ‖a₀ ⊗ 1 + Σ aᵢ ⊗ Uᵢ‖ for independent N×N
/// Haar unitaries Uᵢ.
pub fn lehner_cross_check(coeffs: &[Coefficient], n: usize, seed: Seed) -> Result<LehnerCrossCheck> {
    use crate::ensembles::{sample, EnsembleKind, EnsembleSpec};
    use crate::ncalg::{NcPolynomial, StarLetter, StarMonomial};

    let k = check_coefficients(coeffs)?;
    let p = coeffs.len() - 1;
    let mut poly = NcPolynomial::zero(p.max(1), k)?;
    poly.add_term(coeffs[0].clone(), StarMonomial::unit())?;
    for (i, c) in coeffs.iter().enumerate().skip(1) {
        poly.add_term(c.clone(), StarMonomial::letter(StarLetter::plain(i)))?;
    }
    let spec = EnsembleSpec::new(EnsembleKind::HaarUnitary, n);
    let mats = (0..p.max(1))
        .map(|i| sample(&spec, seed.derive(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let monte_carlo = crate::spectral::operator_norm(&poly.evaluate(&mats)?)?;
    let formula = lehner_norm(coeffs)?;
    Ok(LehnerCrossCheck {
        formula,
        monte_carlo,
        discrepancy: (formula - monte_carlo).abs(),
    })
}
