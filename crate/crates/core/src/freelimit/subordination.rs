//! Free additive and multiplicative convolution through subordination.
//!
//! Both convolutions reduce to a scalar fixed point x = Φ(x; z) at each point
//! of the upper half-plane. It is solved by safeguarded Newton steps (falling
//! back to plain iteration of Φ, which maps the upper half-plane into itself)
//! with warm starts along the evaluation path and a cold start obtained by
//! continuation from far above the real axis.
//!
//! The distribution function is then recovered without smoothing: for x₀ left
//! of the support,
//!
//! ```text
//! F(x) = −(1/π) Im [ i∫₀ʸ G(x₀+iy)dy + ∫_{x₀}^{x} G(t+iY)dt − i∫₀ʸ G(x+iy)dy ]
//! ```
//!
//! which is the integral of −Im G(t + i0)/π over (x₀, x] moved onto a
//! contour where G is smooth. The horizontal leg uses the trapezoid rule with
//! its endpoint correction; the vertical legs use Gauss–Legendre in y = Y s².

use faer::c64;
use gauss_quad::GaussLegendre;

use super::cauchy::CauchyTransform;
use super::measure::{padded_interval, Atom, CompactMeasure, DEFAULT_CELLS};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};

/// Fixed-point residual accepted as converged, relative to max(1, |x|).
pub const FIXED_POINT_TOL: f64 = 1e-12;
/// Residual still reported as converged when the iteration stalls.
const STALL_TOL: f64 = 1e-10;
const MAX_STEPS: usize = 200;
/// Height of the horizontal leg in output cells.
const LEG_HEIGHT_CELLS: f64 = 12.0;
/// Nodes per warm-started block of the horizontal leg.
const BLOCK: usize = 64;
/// Cell masses below this (relative) are treated as quadrature noise.
const NOISE_FLOOR: f64 = 1e-11;
/// Largest tolerated deviation of the recovered continuous mass.
const MASS_RECOVERY_TOL: f64 = 1e-3;

/// A subordination problem: fixed-point map, its derivative, and the
/// resulting Cauchy transform.
pub(crate) trait Subordination: Sync {
    /// (Φ(x), Φ′(x)) or `None` outside the domain.
    fn map(&self, z: c64, x: c64) -> Option<(c64, c64)>;
    /// Fixed point asymptotics for large Im z.
    fn initial(&self, z: c64) -> c64;
    /// G of the convolution at z from the fixed point x.
    fn cauchy(&self, z: c64, x: c64) -> c64;
    /// A length scale of the problem, used for continuation.
    fn scale(&self) -> f64;
}

fn in_domain(x: c64) -> bool {
    x.im > 0.0 && x.re.is_finite() && x.im.is_finite()
}

/// Newton from `guess`; `None` if it does not converge.
fn newton<S: Subordination>(s: &S, z: c64, guess: c64) -> Option<c64> {
    let mut x = guess;
    let (mut phi, mut dphi) = s.map(z, x)?;
    let mut res = (x - phi).norm();
    for _ in 0..MAX_STEPS {
        if res <= FIXED_POINT_TOL * x.norm().max(1.0) {
            return Some(x);
        }
        let mut step = (x - phi) / (c64::new(1.0, 0.0) - dphi);
        let mut accepted = None;
        for _ in 0..30 {
            let cand = x - step;
            if in_domain(cand) {
                if let Some((p, dp)) = s.map(z, cand) {
                    let r = (cand - p).norm();
                    if r < res {
                        accepted = Some((cand, p, dp, r));
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        let (nx, np, ndp, nr) = match accepted {
            Some(a) => a,
            None => {
                // Plain iteration stays in the domain.
                let cand = phi;
                let (p, dp) = s.map(z, cand)?;
                let r = (cand - p).norm();
                if r >= res {
                    return (res <= STALL_TOL * x.norm().max(1.0)).then_some(x);
                }
                (cand, p, dp, r)
            }
        };
        x = nx;
        phi = np;
        dphi = ndp;
        res = nr;
    }
    (res <= STALL_TOL * x.norm().max(1.0)).then_some(x)
}

/// Fixed point at z, by continuation in Im z from far above the axis.
fn cold_solve<S: Subordination>(s: &S, z: c64) -> Result<c64> {
    let fail = Error::NoConvergence { re: z.re, im: z.im };
    let top = (100.0 * s.scale()).max(z.im);
    let mut y = top;
    let mut x = s.initial(c64::new(z.re, y));
    loop {
        let zy = c64::new(z.re, y);
        x = match newton(s, zy, x) {
            Some(v) => v,
            None => return Err(fail),
        };
        if y <= z.im {
            return Ok(x);
        }
        y = (y * 0.5).max(z.im);
    }
}

fn warm_solve<S: Subordination>(s: &S, z: c64, guess: Option<c64>) -> Result<c64> {
    if let Some(g) = guess {
        if let Some(x) = newton(s, z, g) {
            return Ok(x);
        }
    }
    cold_solve(s, z)
}

/// Free additive convolution: ω = z + h_ν(z + h_μ(ω)), h = F − id.
pub(crate) struct Additive {
    mu: CauchyTransform,
    nu: CauchyTransform,
    nu_mean: f64,
    scale: f64,
}

/// (h(w), h′(w)) with h = 1/G − w.
fn h_and_derivative(t: &CauchyTransform, w: c64) -> Option<(c64, c64)> {
    let (g, dg) = t.eval(w);
    if g.norm() == 0.0 || !g.re.is_finite() || !g.im.is_finite() {
        return None;
    }
    let f = g.inv();
    Some((f - w, -dg * f * f - 1.0))
}

impl Subordination for Additive {
    fn map(&self, z: c64, x: c64) -> Option<(c64, c64)> {
        let (hm, dhm) = h_and_derivative(&self.mu, x)?;
        let w2 = z + hm;
        if !in_domain(w2) {
            return None;
        }
        let (hn, dhn) = h_and_derivative(&self.nu, w2)?;
        Some((z + hn, dhn * dhm))
    }

    fn initial(&self, z: c64) -> c64 {
        z - self.nu_mean
    }

    fn cauchy(&self, _z: c64, x: c64) -> c64 {
        self.mu.g(x)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

/// Free multiplicative convolution with ν on [0, ∞), in Cauchy-side
/// variables: ξ₂ = ζ/(ξ₁ − F_μ(ξ₁)), ξ₁ = ζ/(ξ₂ − F_ν(ξ₂)), and
/// G(ζ) = ξ₁ G_μ(ξ₁)/ζ.
pub(crate) struct Multiplicative {
    mu: CauchyTransform,
    nu: CauchyTransform,
    nu_mean: f64,
    scale: f64,
}

/// (w − F(w), 1 − F′(w)).
fn gap_and_derivative(t: &CauchyTransform, w: c64) -> Option<(c64, c64)> {
    let (g, dg) = t.eval(w);
    if g.norm() == 0.0 || !g.re.is_finite() || !g.im.is_finite() {
        return None;
    }
    let f = g.inv();
    Some((w - f, c64::new(1.0, 0.0) + dg * f * f))
}

impl Subordination for Multiplicative {
    fn map(&self, z: c64, x: c64) -> Option<(c64, c64)> {
        let (d1, dd1) = gap_and_derivative(&self.mu, x)?;
        let x2 = z / d1;
        let dx2 = -z * dd1 / (d1 * d1);
        // ν lives on [0, ∞): ξ₂ may cross the axis, but not onto the half-line.
        if !(x2.re.is_finite() && x2.im.is_finite()) || (x2.im == 0.0 && x2.re >= 0.0) {
            return None;
        }
        let (d2, dd2) = gap_and_derivative(&self.nu, x2)?;
        let phi = z / d2;
        let dphi = -z * dd2 / (d2 * d2) * dx2;
        phi.re.is_finite().then_some((phi, dphi))
    }

    fn initial(&self, z: c64) -> c64 {
        z / self.nu_mean
    }

    fn cauchy(&self, z: c64, x: c64) -> c64 {
        x * self.mu.g(x) / z
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

fn hull(m: &CompactMeasure) -> [f64; 2] {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for a in m.atoms() {
        lo = lo.min(a.location);
        hi = hi.max(a.location);
    }
    if let (Some(first), Some(last)) = (
        m.density().iter().position(|&d| d > 0.0),
        m.density().iter().rposition(|&d| d > 0.0),
    ) {
        lo = lo.min(m.node(first));
        hi = hi.max(m.node(last + 1));
    }
    [lo, hi]
}

/// μ ⊞ ν.
pub fn free_add_convolve(mu: &CompactMeasure, nu: &CompactMeasure) -> Result<CompactMeasure> {
    free_add_convolve_with(mu, nu, DEFAULT_CELLS, Execution::default())
}

pub fn free_add_convolve_with(
    mu: &CompactMeasure,
    nu: &CompactMeasure,
    cells: usize,
    exec: Execution,
) -> Result<CompactMeasure> {
    let (hm, hn) = (hull(mu), hull(nu));
    let mut atoms = Vec::new();
    for a in mu.atoms() {
        for b in nu.atoms() {
            let m = a.mass + b.mass - 1.0;
            if m > 0.0 {
                atoms.push(Atom::new(a.location + b.location, m));
            }
        }
    }
    let atom_mass: f64 = atoms.iter().map(|a| a.mass).sum();
    if atom_mass >= 1.0 - 1e-12 {
        return exact_atomic(atoms);
    }
    let problem = Additive {
        mu: CauchyTransform::new(mu),
        nu: CauchyTransform::new(nu),
        nu_mean: nu.mean(),
        scale: (hm[1] - hm[0]).max(hn[1] - hn[0]).max(hm[0].abs().max(hm[1].abs())).max(1e-3),
    };
    let interval = padded_interval(hm[0] + hn[0], hm[1] + hn[1]);
    recover(&problem, atoms, interval, cells, exec)
}

/// μ ⊠ ν for ν supported in [0, ∞) and ν ≠ δ₀.
pub fn free_mult_convolve(mu: &CompactMeasure, nu: &CompactMeasure) -> Result<CompactMeasure> {
    free_mult_convolve_with(mu, nu, DEFAULT_CELLS, Execution::default())
}

pub fn free_mult_convolve_with(
    mu: &CompactMeasure,
    nu: &CompactMeasure,
    cells: usize,
    exec: Execution,
) -> Result<CompactMeasure> {
    let hn = hull(nu);
    if hn[0] < 0.0 {
        return Err(Error::OutOfDomain {
            value: hn[0],
            domain: "second measure supported in [0, inf)",
        });
    }
    let nu_mean = nu.mean();
    if nu_mean <= 0.0 {
        return Err(Error::InvalidMeasure("second measure must not be the point mass at 0".into()));
    }
    let hm = hull(mu);
    let mut atoms = Vec::new();
    let zero_mass = mu.mass_at(0.0).max(nu.mass_at(0.0));
    if zero_mass > 0.0 {
        atoms.push(Atom::new(0.0, zero_mass));
    }
    for a in mu.atoms().iter().filter(|a| a.location != 0.0) {
        for b in nu.atoms().iter().filter(|b| b.location != 0.0) {
            let m = a.mass + b.mass - 1.0;
            if m > 0.0 {
                atoms.push(Atom::new(a.location * b.location, m));
            }
        }
    }
    let atom_mass: f64 = atoms.iter().map(|a| a.mass).sum();
    if atom_mass >= 1.0 - 1e-12 {
        return exact_atomic(atoms);
    }
    let corners = [hm[0] * hn[0], hm[0] * hn[1], hm[1] * hn[0], hm[1] * hn[1]];
    let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let problem = Multiplicative {
        mu: CauchyTransform::new(mu),
        nu: CauchyTransform::new(nu),
        nu_mean,
        scale: (hi - lo).max(lo.abs().max(hi.abs())).max(1e-3),
    };
    recover(&problem, atoms, padded_interval(lo, hi), cells, exec)
}

/// Compressed law μ^(t) = μ ⊠ ((1 − t)δ₀ + tδ₁).
pub fn free_compression(mu: &CompactMeasure, t: f64) -> Result<CompactMeasure> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::OutOfDomain {
            value: t,
            domain: "t in (0, 1]",
        });
    }
    let projection = CompactMeasure::atomic(&[(0.0, 1.0 - t), (1.0, t)])?;
    free_mult_convolve(mu, &projection)
}

fn exact_atomic(atoms: Vec<Atom>) -> Result<CompactMeasure> {
    let total: f64 = atoms.iter().map(|a| a.mass).sum();
    let atoms = atoms.into_iter().map(|a| Atom::new(a.location, a.mass / total)).collect();
    CompactMeasure::from_parts(atoms, [0.0, 0.0], Vec::new())
}

/// Gauss nodes and weights for ∫₀¹ f(s) ds on the panels [0, ¼] and [¼, 1].
fn leg_rule() -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(8.try_into().expect("nonzero order"));
    let mut out = Vec::new();
    for (a, b) in [(0.0, 0.25), (0.25, 1.0)] {
        for (x, w) in rule.iter() {
            out.push((0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w));
        }
    }
    // Descending in s, so the walk down each leg starts next to the top.
    out.sort_by(|p, q| q.0.total_cmp(&p.0));
    out
}

/// Continuous-part Cauchy transform.
fn continuous_g<S: Subordination>(s: &S, atoms: &[Atom], z: c64, x: c64) -> c64 {
    let mut g = s.cauchy(z, x);
    for a in atoms {
        g -= (z - a.location).inv() * a.mass;
    }
    g
}

/// ∫₀ʸ G_c(x + iy) dy, walking down from the top solution.
fn vertical_leg<S: Subordination>(
    s: &S,
    atoms: &[Atom],
    x: f64,
    top: c64,
    height: f64,
    rule: &[(f64, f64)],
) -> Result<c64> {
    let mut state = top;
    let mut acc = c64::new(0.0, 0.0);
    for &(u, w) in rule {
        let z = c64::new(x, height * u * u);
        state = warm_solve(s, z, Some(state))?;
        acc += continuous_g(s, atoms, z, state) * (2.0 * height * u * w);
    }
    Ok(acc)
}

fn recover<S: Subordination>(
    s: &S,
    atoms: Vec<Atom>,
    interval: [f64; 2],
    cells: usize,
    exec: Execution,
) -> Result<CompactMeasure> {
    let h = (interval[1] - interval[0]) / cells as f64;
    let height = LEG_HEIGHT_CELLS * h;
    let nodes: Vec<f64> = (0..=cells).map(|i| interval[0] + i as f64 * h).collect();

    // Horizontal leg: fixed points in warm-started blocks.
    let blocks = nodes.len().div_ceil(BLOCK);
    let top: Vec<Result<Vec<c64>>> = map_indexed(exec, blocks, |b| {
        let range = b * BLOCK..((b + 1) * BLOCK).min(nodes.len());
        let mut out = Vec::with_capacity(range.len());
        let mut prev = None;
        for &x in &nodes[range] {
            let z = c64::new(x, height);
            let v = warm_solve(s, z, prev)?;
            prev = Some(v);
            out.push(v);
        }
        Ok(out)
    });
    let mut states = Vec::with_capacity(nodes.len());
    for b in top {
        states.extend(b?);
    }
    let g_top: Vec<c64> = nodes
        .iter()
        .zip(&states)
        .map(|(&x, &st)| continuous_g(s, &atoms, c64::new(x, height), st))
        .collect();

    // Vertical legs at every node.
    let rule = leg_rule();
    let legs: Vec<Result<c64>> = map_indexed(exec, nodes.len(), |i| {
        vertical_leg(s, &atoms, nodes[i], states[i], height, &rule)
    });
    let legs: Vec<c64> = legs.into_iter().collect::<Result<_>>()?;

    // Horizontal integral with the trapezoid endpoint correction; G′ by
    // differences of the sampled values.
    let n = nodes.len();
    let derivative = |i: usize| -> c64 {
        if i == 0 {
            (g_top[1] * 4.0 - g_top[0] * 3.0 - g_top[2]) / (2.0 * h)
        } else if i == n - 1 {
            (g_top[n - 1] * 3.0 - g_top[n - 2] * 4.0 + g_top[n - 3]) / (2.0 * h)
        } else {
            (g_top[i + 1] - g_top[i - 1]) / (2.0 * h)
        }
    };
    let d0 = derivative(0);
    let mut trapezoid = c64::new(0.0, 0.0);
    let i_unit = c64::new(0.0, 1.0);
    let mut cdf = Vec::with_capacity(n);
    for j in 0..n {
        if j > 0 {
            trapezoid += (g_top[j - 1] + g_top[j]) * (0.5 * h);
        }
        let horizontal = trapezoid - (derivative(j) - d0) * (h * h / 12.0);
        let contour = i_unit * legs[0] + horizontal - i_unit * legs[j];
        cdf.push(-contour.im / std::f64::consts::PI);
    }

    let continuous = 1.0 - atoms.iter().map(|a| a.mass).sum::<f64>();
    let raw: Vec<f64> = cdf.windows(2).map(|w| w[1] - w[0]).collect();
    let floor = NOISE_FLOOR * continuous.max(1e-300);
    let masses: Vec<f64> = raw.iter().map(|&m| if m > floor { m } else { 0.0 }).collect();
    let total: f64 = masses.iter().sum();
    if !(total.is_finite()) || (total - continuous).abs() > MASS_RECOVERY_TOL {
        return Err(Error::InvalidMeasure(format!(
            "recovered continuous mass {total} differs from {continuous}"
        )));
    }
    let masses: Vec<f64> = masses.iter().map(|m| m * continuous / total).collect();
    CompactMeasure::from_cell_masses(atoms, interval, &masses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelimit::measure::{arcsine_cdf, kolmogorov_distance, kolmogorov_to_cdf, semicircle_cdf, semicircle_measure};

    #[test]
    fn bernoulli_sum_is_arcsine() {
        let b = CompactMeasure::atomic(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let s = free_add_convolve(&b, &b).unwrap();
        assert!((s.total_mass() - 1.0).abs() <= 1e-8);
        let k = kolmogorov_to_cdf(&s, arcsine_cdf);
        assert!(k <= 1e-3, "{k}");
    }

    #[test]
    fn semicircles_add_variances() {
        let s = semicircle_measure(1.0).unwrap();
        let sum = free_add_convolve(&s, &s).unwrap();
        let k = kolmogorov_to_cdf(&sum, |x| semicircle_cdf(2.0, x));
        assert!(k <= 1e-3, "{k}");
        assert!((sum.variance() - 2.0).abs() <= 1e-3);
        assert!(sum.mean().abs() <= 1e-3);
    }

    #[test]
    fn dirac_translates() {
        let s = semicircle_measure(1.0).unwrap();
        let t = free_add_convolve(&s, &CompactMeasure::dirac(0.7)).unwrap();
        let k = kolmogorov_distance(&t, &s.translate(0.7));
        assert!(k <= 1e-3, "{k}");
        let d = free_add_convolve(&CompactMeasure::dirac(1.0), &CompactMeasure::dirac(2.0)).unwrap();
        assert_eq!(d, CompactMeasure::dirac(3.0));
    }

    #[test]
    fn multiplicative_identities() {
        let s = semicircle_measure(1.0).unwrap();
        let same = free_mult_convolve(&s, &CompactMeasure::dirac(1.0)).unwrap();
        assert!(kolmogorov_distance(&same, &s) <= 1e-3);
        let scaled = free_mult_convolve(&s, &CompactMeasure::dirac(2.0)).unwrap();
        assert!(kolmogorov_to_cdf(&scaled, |x| semicircle_cdf(4.0, x)) <= 1e-3);
        assert!(free_mult_convolve(&s, &s).is_err());
        assert!(free_mult_convolve(&s, &CompactMeasure::dirac(0.0)).is_err());
    }

    #[test]
    fn compression_of_semicircle() {
        // Route 1: μ ⊠ (½δ₀ + ½δ₁). Route 2: ½δ₀ + ½·D_{1/2}(μ ⊞ μ), which for
        // the semicircle is ½δ₀ + ½·semicircle(½).
        let s = semicircle_measure(1.0).unwrap();
        let c = free_compression(&s, 0.5).unwrap();
        assert!((c.mass_at(0.0) - 0.5).abs() <= 1e-12);
        let continuous = c.nodes().iter().map(|&x| (c.cdf(x) - c.mass_at(0.0) * f64::from(x >= 0.0) - 0.5 * semicircle_cdf(0.5, x)).abs()).fold(0.0, f64::max);
        assert!(continuous <= 1e-3, "{continuous}");
        assert!(free_compression(&s, 0.0).is_err());
        let one = free_compression(&s, 1.0).unwrap();
        assert!(kolmogorov_distance(&one, &s) <= 1e-3);
    }
}
