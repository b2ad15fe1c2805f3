//! Eigendecompositions, empirical distribution functions and their
//! generalized inverses, functional calculus and the quantile couplings built
//! on top of them.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use faer::{c64, Mat, Side};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{parse_complex_cell, MatrixFlags, SquareMatrix, UNITARY_TOL};
use crate::rng::Seed;

/// Relative eigenvalue gap below which two eigenvalues count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Slack used when comparing a cumulative value against a level `s`, so that
/// levels computed by an eigensolver (i/N up to rounding) land on the
/// intended jump.
pub const LEVEL_SLACK: f64 = 1e-12;

/// Default number of grid points of a [`QuantileMap`].
pub const QUANTILE_GRID: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenOrdering {
    RealAscending,
    ArgumentAscending,
}

/// Ordered eigenvalues plus a unitary diagonalizing basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<c64>,
    basis: SquareMatrix,
    ordering: EigenOrdering,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[c64] {
        &self.eigenvalues
    }

    /// Real parts of the eigenvalues; exact for Hermitian decompositions.
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    /// Eigenvalue arguments in [0, 2π).
    pub fn arguments(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&z| argument(z)).collect()
    }

    pub fn basis(&self) -> &SquareMatrix {
        &self.basis
    }

    pub fn ordering(&self) -> EigenOrdering {
        self.ordering
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `basis · diag(eigenvalues) · basis*`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let m = crate::ensembles::conjugate_diagonal(self.basis.as_mat(), &self.eigenvalues);
        SquareMatrix::from_mat_unchecked(m, MatrixFlags::NONE).detect_flags()
    }

    /// `max|reconstruct − A| / max(max|A|, 1)`.
    pub fn reconstruction_residual(&self, original: &SquareMatrix) -> Result<f64> {
        let diff = self.reconstruct().max_abs_diff(original)?;
        Ok(diff / original.max_abs().max(1.0))
    }

    /// Smallest gap between consecutive sorted eigenvalues, with its index.
    /// Uses the real parts or the arguments depending on the ordering.
    pub fn min_gap(&self) -> Option<(usize, f64)> {
        let keys = match self.ordering {
            EigenOrdering::RealAscending => self.real_eigenvalues(),
            EigenOrdering::ArgumentAscending => self.arguments(),
        };
        keys.windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[1] - w[0]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Same decomposition with every basis vector multiplied by an
    /// independent uniform phase. For a matrix drawn from a unitarily
    /// invariant law with simple spectrum this makes the basis exactly Haar
    /// distributed, removing the solver's phase convention.
    pub fn with_random_phases(&self, seed: Seed) -> SpectralDecomposition {
        let mut rng = seed.rng();
        let n = self.dim();
        let phases: Vec<c64> = (0..n).map(|_| c64::from_polar(1.0, TAU * rng.random::<f64>())).collect();
        let b = self.basis.as_mat();
        let basis = Mat::from_fn(n, n, |i, j| b[(i, j)] * phases[j]);
        SpectralDecomposition {
            eigenvalues: self.eigenvalues.clone(),
            basis: SquareMatrix::from_mat_unchecked(basis, MatrixFlags::UNITARY),
            ordering: self.ordering,
        }
    }
}

/// Argument of `z` in [0, 2π). Values within 1e−12 below 2π wrap to 0.
pub fn argument(z: c64) -> f64 {
    let mut t = z.im.atan2(z.re);
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU - 1e-12 {
        0.0
    } else {
        t
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(a: &SquareMatrix) -> Result<SpectralDecomposition> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian {
            residual: a.hermiticity_residual(),
        });
    }
    let evd = a
        .as_mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.total_cmp(&s[j].re));
    let eigenvalues = order.iter().map(|&i| c64::new(s[i].re, 0.0)).collect();
    let basis = Mat::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        basis: SquareMatrix::from_mat_unchecked(basis, MatrixFlags::UNITARY),
        ordering: EigenOrdering::RealAscending,
    })
}

/// Eigendecomposition of a unitary matrix, eigenvalues sorted by argument in
/// [0, 2π).
///
/// The general eigensolver returns a basis that is only approximately
/// orthonormal, so it is re-orthonormalized (QR in sorted order) and the
/// eigenvalues are recomputed as Rayleigh quotients in the new basis.
pub fn eig_unitary(u: &SquareMatrix) -> Result<SpectralDecomposition> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary {
            residual: u.unitarity_residual(),
        });
    }
    let n = u.dim();
    let evd = u.as_mat().eigen().map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let v = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| argument(s[i]).total_cmp(&argument(s[j])));
    let sorted = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    let q = sorted.qr().compute_Q();
    let uq = u.as_mat() * &q;
    let mut pairs: Vec<(c64, usize)> = (0..n)
        .map(|j| {
            let mut z = c64::new(0.0, 0.0);
            for i in 0..n {
                z += q[(i, j)].conj() * uq[(i, j)];
            }
            (z, j)
        })
        .collect();
    pairs.sort_by(|a, b| argument(a.0).total_cmp(&argument(b.0)));
    let basis = Mat::from_fn(n, n, |i, j| q[(i, pairs[j].1)]);
    Ok(SpectralDecomposition {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        basis: SquareMatrix::from_mat_unchecked(basis, MatrixFlags::UNITARY),
        ordering: EigenOrdering::ArgumentAscending,
    })
}

/// Nondecreasing right-continuous step function with values in [0, 1],
/// jumping at `jump_points` to `cumulative_values` and equal to 0 before the
/// first jump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    jump_points: Vec<f64>,
    cumulative_values: Vec<f64>,
}

impl StepFunction {
    pub fn new(jump_points: Vec<f64>, cumulative_values: Vec<f64>) -> Result<Self> {
        if jump_points.is_empty() {
            return Err(Error::EmptyData);
        }
        if jump_points.len() != cumulative_values.len() {
            return Err(Error::DimensionMismatch {
                expected: jump_points.len(),
                actual: cumulative_values.len(),
            });
        }
        if jump_points.iter().chain(&cumulative_values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite step function entry".into()));
        }
        if jump_points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMeasure("jump points must be strictly ascending".into()));
        }
        if cumulative_values.windows(2).any(|w| w[1] < w[0]) || cumulative_values[0] < 0.0 {
            return Err(Error::InvalidMeasure("cumulative values must be nondecreasing and nonnegative".into()));
        }
        if *cumulative_values.last().unwrap() != 1.0 {
            return Err(Error::InvalidMeasure("final cumulative value must be 1".into()));
        }
        Ok(Self {
            jump_points,
            cumulative_values,
        })
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    pub fn cumulative_values(&self) -> &[f64] {
        &self.cumulative_values
    }

    /// F(t), right-continuous.
    pub fn evaluate(&self, t: f64) -> f64 {
        let k = self.jump_points.partition_point(|&x| x <= t);
        if k == 0 {
            0.0
        } else {
            self.cumulative_values[k - 1]
        }
    }

    /// Left limit F(t−).
    pub fn left_limit(&self, t: f64) -> f64 {
        let k = self.jump_points.partition_point(|&x| x < t);
        if k == 0 {
            0.0
        } else {
            self.cumulative_values[k - 1]
        }
    }

    /// Two-column CSV: `jump_point,cumulative_value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "jump_point,cumulative_value")?;
        for (x, v) in self.jump_points.iter().zip(&self.cumulative_values) {
            writeln!(w, "{x:?},{v:?}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (line_no, line) in r.lines().enumerate() {
            let line = line?;
            if line_no == 0 || line.trim().is_empty() {
                continue;
            }
            let (a, b) = line.split_once(',').ok_or_else(|| Error::Parse {
                position: line_no,
                message: "expected two columns".into(),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse {
                    position: line_no,
                    message: e.to_string(),
                })
            };
            points.push(parse(a)?);
            values.push(parse(b)?);
        }
        Self::new(points, values)
    }
}

/// F(t) = #{λ ≤ t}/N with ties accumulated.
pub fn empirical_cdf(eigenvalues: &[f64]) -> Result<StepFunction> {
    if eigenvalues.is_empty() {
        return Err(Error::EmptyData);
    }
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidMeasure("non-finite eigenvalue".into()));
    }
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut points = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for (i, &x) in sorted.iter().enumerate() {
        if i + 1 < n && sorted[i + 1] == x {
            continue;
        }
        points.push(x);
        values.push((i + 1) as f64 / n as f64);
    }
    StepFunction::new(points, values)
}

/// F⁻¹(s) = inf{t : F(t) ≥ s} for s in (0, 1].
///
/// Levels within [`LEVEL_SLACK`] above a cumulative value are treated as
/// equal to it.
pub fn generalized_inverse(f: &StepFunction, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::OutOfDomain {
            value: s,
            domain: "(0, 1]",
        });
    }
    Ok(inverse_unchecked(f, s))
}

fn inverse_unchecked(f: &StepFunction, s: f64) -> f64 {
    let k = f.cumulative_values.partition_point(|&v| v < s - LEVEL_SLACK);
    f.jump_points[k.min(f.jump_points.len() - 1)]
}

/// A map applied to a spectrum contained in [0, 1].
pub trait SpectralMap {
    fn apply(&self, s: f64) -> c64;
}

impl<F: Fn(f64) -> c64> SpectralMap for F {
    fn apply(&self, s: f64) -> c64 {
        self(s)
    }
}

/// The generalized inverse of a step function as a map on [0, 1]; the value
/// at 0 is the right limit (the first jump point).
#[derive(Debug, Clone, Copy)]
pub struct StepInverse<'a>(pub &'a StepFunction);

impl SpectralMap for StepInverse<'_> {
    fn apply(&self, s: f64) -> c64 {
        c64::new(inverse_unchecked(self.0, s.max(0.0)), 0.0)
    }
}

/// Piecewise-linear map on m uniform grid points of [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileMap {
    values: Vec<c64>,
}

impl QuantileMap {
    pub fn new(values: Vec<c64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::GridMismatch("a quantile map needs at least two grid points".into()));
        }
        if let Some(bad) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteFunction {
                at: bad as f64 / (values.len() - 1) as f64,
            });
        }
        Ok(Self { values })
    }

    /// Sample `f` at the m grid points.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> c64) -> Result<Self> {
        if m < 2 {
            return Err(Error::GridMismatch("a quantile map needs at least two grid points".into()));
        }
        Self::new((0..m).map(|i| f(grid_point(i, m))).collect())
    }

    /// Grid samples of the generalized inverse of `f`.
    pub fn from_step_inverse(f: &StepFunction, m: usize) -> Result<Self> {
        let inv = StepInverse(f);
        Self::from_fn(m, |s| inv.apply(s))
    }

    pub fn grid_len(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[c64] {
        &self.values
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| grid_point(i, self.values.len())).collect()
    }

    pub fn evaluate(&self, s: f64) -> c64 {
        let m = self.values.len();
        let x = s.clamp(0.0, 1.0) * (m - 1) as f64;
        let i = (x.floor() as usize).min(m - 2);
        let w = x - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    /// Max over the common grid of |γ₁ − γ₂|. Exact for piecewise-linear maps.
    pub fn sup_distance(&self, other: &QuantileMap) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::GridMismatch(format!(
                "grid sizes {} and {}",
                self.values.len(),
                other.values.len()
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Two-column CSV: `grid,value` with the value as a quoted `"re,im"` cell.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "grid,value")?;
        let m = self.values.len();
        for (i, z) in self.values.iter().enumerate() {
            writeln!(w, "{:?},\"{:?},{:?}\"", grid_point(i, m), z.re, z.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut values = Vec::new();
        for (line_no, line) in r.lines().enumerate() {
            let line = line?;
            if line_no == 0 || line.trim().is_empty() {
                continue;
            }
            let (_, cell) = line.split_once(',').ok_or_else(|| Error::Parse {
                position: line_no,
                message: "expected two columns".into(),
            })?;
            values.push(parse_complex_cell(cell)?);
        }
        Self::new(values)
    }
}

impl SpectralMap for QuantileMap {
    fn apply(&self, s: f64) -> c64 {
        self.evaluate(s)
    }
}

fn grid_point(i: usize, m: usize) -> f64 {
    i as f64 / (m - 1) as f64
}

/// `basis · diag(f(λ)) · basis*`.
pub fn functional_calculus(d: &SpectralDecomposition, f: impl Fn(c64) -> c64) -> Result<SquareMatrix> {
    let values: Vec<c64> = d.eigenvalues.iter().map(|&z| f(z)).collect();
    apply_in_basis(d, values)
}

fn apply_in_basis(d: &SpectralDecomposition, values: Vec<c64>) -> Result<SquareMatrix> {
    if let Some(bad) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFiniteFunction {
            at: d.eigenvalues[bad].re,
        });
    }
    let real = values.iter().all(|z| z.im == 0.0);
    let flags = MatrixFlags {
        hermitian: real,
        unitary: values.iter().all(|z| (z.norm() - 1.0).abs() <= UNITARY_TOL),
        selfdual: false,
    };
    let m = crate::ensembles::conjugate_diagonal(d.basis.as_mat(), &values);
    let out = SquareMatrix::from_mat_unchecked(m, flags);
    Ok(if real { out.hermitian_part().with_flags(flags) } else { out })
}

fn check_gaps(d: &SpectralDecomposition, scale: f64) -> Result<()> {
    let tolerance = TIE_TOL * scale;
    if let Some((index, gap)) = d.min_gap() {
        if gap <= tolerance {
            return Err(Error::DegenerateCoupling { index, gap, tolerance });
        }
    }
    Ok(())
}

/// `V_A diag(1/N, …, N/N) V_A*`, which equals F_A(A) when A has simple
/// spectrum.
pub fn coupling_reference(a: &SquareMatrix) -> Result<SquareMatrix> {
    let d = eig_hermitian(a)?;
    let scale = d.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    check_gaps(&d, scale)?;
    Ok(uniform_levels(&d))
}

fn uniform_levels(d: &SpectralDecomposition) -> SquareMatrix {
    let n = d.dim();
    let levels: Vec<c64> = (1..=n).map(|i| c64::new(i as f64 / n as f64, 0.0)).collect();
    apply_in_basis(d, levels).expect("finite levels")
}

/// Tolerance for eigenvalues of a coupling reference outside [0, 1].
const UNIT_INTERVAL_SLACK: f64 = 1e-9;

/// `γ(M)` through the eigenbasis of a Hermitian M with spectrum in [0, 1].
pub fn coupled_copy(m: &SquareMatrix, gamma: &impl SpectralMap) -> Result<SquareMatrix> {
    let d = eig_hermitian(m)?;
    coupled_copy_of(&d, gamma)
}

/// As [`coupled_copy`], reusing an existing decomposition of M.
pub fn coupled_copy_of(d: &SpectralDecomposition, gamma: &impl SpectralMap) -> Result<SquareMatrix> {
    let mut levels = Vec::with_capacity(d.dim());
    for z in &d.eigenvalues {
        if z.re < -UNIT_INTERVAL_SLACK || z.re > 1.0 + UNIT_INTERVAL_SLACK {
            return Err(Error::SpectrumOutOfRange { value: z.re });
        }
        levels.push(gamma.apply(z.re.clamp(0.0, 1.0)));
    }
    apply_in_basis(d, levels)
}

/// Rebuilds U as `exp(2πi F_U⁻¹(M))`, where M carries the levels i/N in U's
/// argument-ordered eigenbasis and F_U is the distribution function of the
/// normalized arguments. Returns the max-entry distance to U.
pub fn haar_reconstruction_check(u: &SquareMatrix) -> Result<f64> {
    let d = eig_unitary(u)?;
    check_gaps(&d, TAU)?;
    let m = uniform_levels(&d);
    let theta: Vec<f64> = d.arguments().iter().map(|t| t / TAU).collect();
    let f = empirical_cdf(&theta)?;
    let inv = StepInverse(&f);
    let gamma = |s: f64| c64::from_polar(1.0, TAU * inv.apply(s).re);
    let rebuilt = coupled_copy(&m, &gamma)?;
    rebuilt.max_abs_diff(u)
}

/// sup over s in (0, 1] of |F_U⁻¹(s) − s|, with F_U the distribution function
/// of the normalized eigenvalue arguments. Computed exactly from the steps.
pub fn quantile_identity_drift(u: &SquareMatrix) -> Result<f64> {
    let d = eig_unitary(u)?;
    let n = d.dim() as f64;
    Ok(d.arguments()
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let theta = t / TAU;
            (theta - k as f64 / n).abs().max((theta - (k + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max))
}

/// Disjoint closed intervals in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct SupportSet {
    intervals: Vec<[f64; 2]>,
}

impl SupportSet {
    pub fn new(intervals: Vec<[f64; 2]>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptySupport);
        }
        for iv in &intervals {
            if !(iv[0].is_finite() && iv[1].is_finite() && iv[0] <= iv[1]) {
                return Err(Error::InvalidMeasure(format!("bad interval [{}, {}]", iv[0], iv[1])));
            }
        }
        if intervals.windows(2).any(|w| w[1][0] <= w[0][1]) {
            return Err(Error::InvalidMeasure("intervals must be disjoint and ascending".into()));
        }
        Ok(Self { intervals })
    }

    /// Sort and merge arbitrary (possibly overlapping) intervals.
    pub fn merged(mut intervals: Vec<[f64; 2]>) -> Result<Self> {
        intervals.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match out.last_mut() {
                Some(last) if iv[0] <= last[1] => last[1] = last[1].max(iv[1]),
                _ => out.push(iv),
            }
        }
        Self::new(out)
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn hull(&self) -> [f64; 2] {
        [self.intervals[0][0], self.intervals[self.intervals.len() - 1][1]]
    }

    pub fn distance(&self, x: f64) -> f64 {
        self.intervals
            .iter()
            .map(|iv| if x < iv[0] { iv[0] - x } else if x > iv[1] { x - iv[1] } else { 0.0 })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.intervals).expect("finite intervals serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Vec<[f64; 2]> = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::new(v)
    }
}

impl TryFrom<Vec<[f64; 2]>> for SupportSet {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SupportSet> for Vec<[f64; 2]> {
    fn from(s: SupportSet) -> Self {
        s.intervals
    }
}

/// True iff every eigenvalue lies within `epsilon` of the support.
pub fn support_neighborhood_check(eigenvalues: &[f64], support: &SupportSet, epsilon: f64) -> Result<bool> {
    if !(epsilon > 0.0) {
        return Err(Error::OutOfDomain {
            value: epsilon,
            domain: "epsilon > 0",
        });
    }
    Ok(eigenvalues.iter().all(|&x| support.distance(x) <= epsilon))
}

/// Largest singular value.
pub fn operator_norm(a: &SquareMatrix) -> Result<f64> {
    let m = a.as_mat();
    let eig = |h: &Mat<c64>| {
        h.self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Decomposition(format!("{e:?}")))
    };
    if a.is_hermitian() {
        let s = eig(m)?;
        Ok(s.iter().map(|x| x.abs()).fold(0.0, f64::max))
    } else {
        let gram = m.adjoint() * m;
        let s = eig(&gram)?;
        Ok(s.iter().copied().fold(0.0, f64::max).max(0.0).sqrt())
    }
}

/// Sorted eigenvalues of a Hermitian matrix, without the basis.
pub fn hermitian_eigenvalues(a: &SquareMatrix) -> Result<Vec<f64>> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian {
            residual: a.hermiticity_residual(),
        });
    }
    let mut s = a
        .as_mat()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// (1/N) Tr A.
pub fn normalized_trace(a: &SquareMatrix) -> c64 {
    a.normalized_trace()
}
