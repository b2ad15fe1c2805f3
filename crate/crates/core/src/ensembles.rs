//! Seedable samplers for the Gaussian and Haar ensembles.
//!
//! Normalization: every Gaussian ensemble is scaled so that its limiting
//! eigenvalue law is the semicircle on [-2, 2], and every Ginibre sampler has
//! complex entries of variance 1/n (singular values fill [0, 2]).
//!
//! Quaternionic ensembles (GSE, symplectic Haar) are stored as 2n×2n complex
//! matrices in the block form `[[A, B], [-conj(B), conj(A)]]`, which is
//! self-dual for the skew form `J = [[0, I], [-I, 0]]`.

use faer::{c64, Mat};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{MatrixFlags, SquareMatrix};
use crate::rng::Seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Gue,
    Goe,
    Gse,
    HaarUnitary,
    HaarOrthogonal,
    HaarSymplectic,
    Permutation,
    ConjugatedDiagonal,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Gue => "gue",
            EnsembleKind::Goe => "goe",
            EnsembleKind::Gse => "gse",
            EnsembleKind::HaarUnitary => "haar_unitary",
            EnsembleKind::HaarOrthogonal => "haar_orthogonal",
            EnsembleKind::HaarSymplectic => "haar_symplectic",
            EnsembleKind::Permutation => "permutation",
            EnsembleKind::ConjugatedDiagonal => "conjugated_diagonal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let all = [
            EnsembleKind::Gue,
            EnsembleKind::Goe,
            EnsembleKind::Gse,
            EnsembleKind::HaarUnitary,
            EnsembleKind::HaarOrthogonal,
            EnsembleKind::HaarSymplectic,
            EnsembleKind::Permutation,
            EnsembleKind::ConjugatedDiagonal,
        ];
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        all.into_iter().find(|k| k.name() == s)
    }

    fn needs_even_dimension(self) -> bool {
        matches!(self, EnsembleKind::Gse | EnsembleKind::HaarSymplectic)
    }
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal_data: Option<Vec<c64>>,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dimension: usize) -> Self {
        Self {
            kind,
            dimension,
            diagonal_data: None,
        }
    }

    pub fn conjugated_diagonal(data: Vec<c64>) -> Self {
        Self {
            kind: EnsembleKind::ConjugatedDiagonal,
            dimension: data.len(),
            diagonal_data: Some(data),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if self.kind.needs_even_dimension() && self.dimension % 2 != 0 {
            return Err(Error::OddDimension {
                what: self.kind.name(),
                dimension: self.dimension,
            });
        }
        if self.kind == EnsembleKind::ConjugatedDiagonal {
            match &self.diagonal_data {
                None => return Err(Error::EmptyData),
                Some(d) if d.is_empty() => return Err(Error::EmptyData),
                Some(d) if d.len() != self.dimension => {
                    return Err(Error::DimensionMismatch {
                        expected: self.dimension,
                        actual: d.len(),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Draw one matrix of any kind.
pub fn sample(spec: &EnsembleSpec, seed: Seed) -> Result<SquareMatrix> {
    spec.validate()?;
    match spec.kind {
        EnsembleKind::Gue | EnsembleKind::Goe | EnsembleKind::Gse => sample_gaussian_hermitian(spec, seed),
        EnsembleKind::HaarUnitary | EnsembleKind::HaarOrthogonal | EnsembleKind::HaarSymplectic => sample_haar(spec, seed),
        EnsembleKind::Permutation => sample_permutation(spec.dimension, seed),
        EnsembleKind::ConjugatedDiagonal => conjugate_by_haar(spec.diagonal_data.as_deref().unwrap_or(&[]), seed),
    }
}

#[inline]
fn normal<R: Rng>(rng: &mut R, std_dev: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * std_dev
}

#[inline]
fn complex_normal<R: Rng>(rng: &mut R, variance: f64) -> c64 {
    let s = (variance / 2.0).sqrt();
    let re = normal(rng, s);
    let im = normal(rng, s);
    c64::new(re, im)
}

/// i.i.d. Gaussian matrix with complex entries of variance 1/n. Entries are
/// drawn in row-major order. For `Field::Quaternion`, `n` is the stored
/// (even) size of the complex representation.
pub fn sample_ginibre(n: usize, field: Field, seed: Seed) -> Result<SquareMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rng = seed.rng();
    let var = 1.0 / n as f64;
    let data = match field {
        Field::Real => {
            let s = var.sqrt();
            let entries: Vec<f64> = (0..n * n).map(|_| normal(&mut rng, s)).collect();
            Mat::from_fn(n, n, |i, j| c64::new(entries[i * n + j], 0.0))
        }
        Field::Complex => {
            let entries: Vec<c64> = (0..n * n).map(|_| complex_normal(&mut rng, var)).collect();
            Mat::from_fn(n, n, |i, j| entries[i * n + j])
        }
        Field::Quaternion => {
            if n % 2 != 0 {
                return Err(Error::OddDimension {
                    what: "quaternion ginibre",
                    dimension: n,
                });
            }
            let h = n / 2;
            let a: Vec<c64> = (0..h * h).map(|_| complex_normal(&mut rng, var)).collect();
            let b: Vec<c64> = (0..h * h).map(|_| complex_normal(&mut rng, var)).collect();
            quaternion_blocks(h, |i, j| a[i * h + j], |i, j| b[i * h + j])
        }
    };
    Ok(SquareMatrix::from_mat_unchecked(data, MatrixFlags::NONE))
}

/// `[[A, B], [-conj(B), conj(A)]]` from block entry functions.
fn quaternion_blocks(h: usize, a: impl Fn(usize, usize) -> c64, b: impl Fn(usize, usize) -> c64) -> Mat<c64> {
    Mat::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
        (true, true) => a(i, j),
        (true, false) => b(i, j - h),
        (false, true) => -b(i - h, j).conj(),
        (false, false) => a(i - h, j - h).conj(),
    })
}

/// GUE, GOE or GSE sample normalized to the semicircle on [-2, 2].
pub fn sample_gaussian_hermitian(spec: &EnsembleSpec, seed: Seed) -> Result<SquareMatrix> {
    spec.validate()?;
    let n = spec.dimension;
    let mut rng = seed.rng();
    let nf = n as f64;
    let mat = match spec.kind {
        EnsembleKind::Gue => {
            let mut m = Mat::<c64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = c64::new(normal(&mut rng, (1.0 / nf).sqrt()), 0.0);
                for j in i + 1..n {
                    let z = complex_normal(&mut rng, 1.0 / nf);
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            m
        }
        EnsembleKind::Goe => {
            let mut m = Mat::<c64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = c64::new(normal(&mut rng, (2.0 / nf).sqrt()), 0.0);
                for j in i + 1..n {
                    let x = c64::new(normal(&mut rng, (1.0 / nf).sqrt()), 0.0);
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            m
        }
        EnsembleKind::Gse => {
            // Quaternion entries with E|q_ij|^2 = 1/h off the diagonal and
            // real diagonal entries of variance 1/(2h).
            let h = n / 2;
            let hf = h as f64;
            let mut a = vec![c64::new(0.0, 0.0); h * h];
            let mut b = vec![c64::new(0.0, 0.0); h * h];
            for i in 0..h {
                a[i * h + i] = c64::new(normal(&mut rng, (1.0 / (2.0 * hf)).sqrt()), 0.0);
                for j in i + 1..h {
                    let za = complex_normal(&mut rng, 1.0 / (2.0 * hf));
                    a[i * h + j] = za;
                    a[j * h + i] = za.conj();
                    let zb = complex_normal(&mut rng, 1.0 / (2.0 * hf));
                    b[i * h + j] = zb;
                    b[j * h + i] = -zb;
                }
            }
            quaternion_blocks(h, |i, j| a[i * h + j], |i, j| b[i * h + j])
        }
        kind => {
            return Err(Error::WrongKind {
                kind: kind.name(),
                operation: "sample_gaussian_hermitian",
            })
        }
    };
    let flags = MatrixFlags {
        hermitian: true,
        unitary: false,
        selfdual: spec.kind == EnsembleKind::Gse,
    };
    Ok(SquareMatrix::from_mat_unchecked(mat, flags))
}

/// Haar-distributed matrix on U(N), O(N) or Sp(N/2).
///
/// Unitary and orthogonal samples are the Q factor of a Ginibre QR with each
/// column rescaled by the phase (sign) of the matching diagonal entry of R,
/// which makes the law exactly Haar. Symplectic samples come from
/// quaternionic Gram–Schmidt, whose R factor has positive real diagonal by
/// construction.
pub fn sample_haar(spec: &EnsembleSpec, seed: Seed) -> Result<SquareMatrix> {
    spec.validate()?;
    let n = spec.dimension;
    match spec.kind {
        EnsembleKind::HaarUnitary => Ok(haar_unitary(n, seed)),
        EnsembleKind::HaarOrthogonal => Ok(haar_orthogonal(n, seed)),
        EnsembleKind::HaarSymplectic => Ok(haar_symplectic(n / 2, seed)),
        kind => Err(Error::WrongKind {
            kind: kind.name(),
            operation: "sample_haar",
        }),
    }
}

pub(crate) fn haar_unitary(n: usize, seed: Seed) -> SquareMatrix {
    let g = sample_ginibre(n, Field::Complex, seed).expect("positive dimension").into_mat();
    let qr = g.qr();
    let r = qr.R();
    let mut q = qr.compute_Q();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { c64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    SquareMatrix::from_mat_unchecked(q, MatrixFlags::UNITARY)
}

fn haar_orthogonal(n: usize, seed: Seed) -> SquareMatrix {
    let mut rng = seed.rng();
    let s = (1.0 / n as f64).sqrt();
    let entries: Vec<f64> = (0..n * n).map(|_| normal(&mut rng, s)).collect();
    let g = Mat::<f64>::from_fn(n, n, |i, j| entries[i * n + j]);
    let qr = g.qr();
    let r = qr.R();
    let q = qr.compute_Q();
    let data = Mat::from_fn(n, n, |i, j| {
        let sign = if r[(j, j)] < 0.0 { -1.0 } else { 1.0 };
        c64::new(q[(i, j)] * sign, 0.0)
    });
    SquareMatrix::from_mat_unchecked(data, MatrixFlags::UNITARY)
}

/// Haar element of Sp(h) in its 2h×2h complex representation.
fn haar_symplectic(h: usize, seed: Seed) -> SquareMatrix {
    let g = sample_ginibre(2 * h, Field::Quaternion, seed).expect("even dimension").into_mat();
    let n = 2 * h;
    // Columns j and h + j form the quaternionic column j; the second is the
    // image of the first under the antiunitary partner map (u, v) -> (-conj v, conj u).
    let mut q = Mat::<c64>::zeros(n, n);
    let mut built: Vec<usize> = Vec::with_capacity(n);
    for j in 0..h {
        let mut x: Vec<c64> = (0..n).map(|i| g[(i, j)]).collect();
        for _pass in 0..2 {
            for &k in &built {
                let mut dot = c64::new(0.0, 0.0);
                for i in 0..n {
                    dot += q[(i, k)].conj() * x[i];
                }
                for i in 0..n {
                    x[i] -= q[(i, k)] * dot;
                }
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] = x[i] / norm;
        }
        for i in 0..h {
            q[(i, h + j)] = -q[(h + i, j)].conj();
            q[(h + i, h + j)] = q[(i, j)].conj();
        }
        built.push(j);
        built.push(h + j);
    }
    let flags = MatrixFlags {
        hermitian: false,
        unitary: true,
        selfdual: false,
    };
    SquareMatrix::from_mat_unchecked(q, flags)
}

/// `V diag(data) V*` with V a fresh Haar unitary.
pub fn conjugate_by_haar(data: &[c64], seed: Seed) -> Result<SquareMatrix> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let n = data.len();
    let real = data.iter().all(|d| d.im == 0.0);
    let on_circle = data.iter().all(|d| (d.norm() - 1.0).abs() <= crate::matrix::UNITARY_TOL);
    let flags = MatrixFlags {
        hermitian: real,
        unitary: on_circle,
        selfdual: false,
    };
    if data.iter().all(|d| *d == data[0]) {
        let mut m = Mat::<c64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = data[0];
        }
        return Ok(SquareMatrix::from_mat_unchecked(m, flags));
    }
    let v = haar_unitary(n, seed);
    let m = conjugate_diagonal(v.as_mat(), data);
    let out = SquareMatrix::from_mat_unchecked(m, flags);
    Ok(if real { out.hermitian_part().with_flags(flags) } else { out })
}

/// `V diag(d) V*`.
pub(crate) fn conjugate_diagonal(v: &Mat<c64>, d: &[c64]) -> Mat<c64> {
    let n = v.nrows();
    let vd = Mat::from_fn(n, n, |i, j| v[(i, j)] * d[j]);
    &vd * v.adjoint()
}

/// Uniform random permutation matrix, `P[i, σ(i)] = 1`.
pub fn sample_permutation(n: usize, seed: Seed) -> Result<SquareMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut seed.rng());
    let mut m = Mat::<c64>::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = c64::new(1.0, 0.0);
    }
    let flags = MatrixFlags {
        hermitian: false,
        unitary: true,
        selfdual: false,
    };
    Ok(SquareMatrix::from_mat_unchecked(m, flags))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seeds(count: u64) -> impl Iterator<Item = Seed> {
        (0..count).map(|s| Seed::new(2024, s))
    }

    #[test]
    fn ginibre_entry_variance() {
        let count = 10_000;
        let var: f64 = seeds(count)
            .map(|s| sample_ginibre(1, Field::Complex, s).unwrap().get(0, 0).norm_sqr())
            .sum::<f64>()
            / count as f64;
        assert!((var - 1.0).abs() <= 0.05, "variance {var}");
    }

    #[test]
    fn ginibre_is_deterministic_and_validates() {
        let a = sample_ginibre(2, Field::Real, Seed::new(5, 9)).unwrap();
        let b = sample_ginibre(2, Field::Real, Seed::new(5, 9)).unwrap();
        assert_eq!(a, b);
        assert!(a.row_major().iter().all(|z| z.im == 0.0));
        assert_eq!(sample_ginibre(0, Field::Complex, Seed::new(0, 0)).unwrap_err(), Error::ZeroDimension);
        assert!(matches!(
            sample_ginibre(3, Field::Quaternion, Seed::new(0, 0)),
            Err(Error::OddDimension { .. })
        ));
        let q = sample_ginibre(4, Field::Quaternion, Seed::new(0, 0)).unwrap();
        assert_eq!(q.dim(), 4);
    }

    #[test]
    fn ginibre_singular_values_quarter_circle_edge() {
        let trials = 100;
        let inside = seeds(trials)
            .filter(|&s| {
                let g = sample_ginibre(64, Field::Complex, s).unwrap();
                let sv = g.as_mat().singular_values().unwrap();
                sv.iter().all(|&x| (0.0..=2.2).contains(&x))
            })
            .count();
        assert!(inside as f64 >= 0.99 * trials as f64, "{inside}/{trials}");
    }

    #[test]
    fn gue_one_by_one_variance() {
        let spec = EnsembleSpec::new(EnsembleKind::Gue, 1);
        let count = 10_000;
        let var: f64 = seeds(count)
            .map(|s| sample_gaussian_hermitian(&spec, s).unwrap().get(0, 0).re.powi(2))
            .sum::<f64>()
            / count as f64;
        assert!((var - 1.0).abs() <= 0.05, "variance {var}");
    }

    #[test]
    fn gaussian_ensembles_are_hermitian_with_unit_second_moment() {
        for kind in [EnsembleKind::Gue, EnsembleKind::Goe, EnsembleKind::Gse] {
            let spec = EnsembleSpec::new(kind, 200);
            let mut m2 = 0.0;
            for s in seeds(10) {
                let x = sample_gaussian_hermitian(&spec, s).unwrap();
                assert!(x.is_hermitian());
                assert!(x.hermiticity_residual() <= 1e-12 * x.max_abs());
                if kind == EnsembleKind::Gse {
                    assert!(x.is_selfdual());
                    assert!(x.selfduality_residual() <= 1e-12 * x.max_abs());
                }
                m2 += x.as_mat().squared_norm_l2() / 200.0;
            }
            m2 /= 10.0;
            assert!((m2 - 1.0).abs() <= 0.05, "{kind}: tau(X^2) = {m2}");
        }
    }

    #[test]
    fn gaussian_rejects_wrong_kind_and_odd_gse() {
        let wrong = EnsembleSpec::new(EnsembleKind::HaarUnitary, 4);
        assert!(matches!(sample_gaussian_hermitian(&wrong, Seed::new(0, 0)), Err(Error::WrongKind { .. })));
        let odd = EnsembleSpec::new(EnsembleKind::Gse, 5);
        assert!(matches!(sample_gaussian_hermitian(&odd, Seed::new(0, 0)), Err(Error::OddDimension { .. })));
    }

    #[test]
    fn haar_unitarity_all_groups() {
        for (kind, n) in [
            (EnsembleKind::HaarUnitary, 1),
            (EnsembleKind::HaarUnitary, 200),
            (EnsembleKind::HaarOrthogonal, 50),
            (EnsembleKind::HaarSymplectic, 60),
        ] {
            let u = sample_haar(&EnsembleSpec::new(kind, n), Seed::new(1, 2)).unwrap();
            assert!(u.is_unitary());
            assert!(u.unitarity_residual() <= 1e-10, "{kind} residual {}", u.unitarity_residual());
            if n == 1 {
                assert!((u.get(0, 0).norm() - 1.0).abs() <= 1e-12);
            }
        }
        let o = sample_haar(&EnsembleSpec::new(EnsembleKind::HaarOrthogonal, 20), Seed::new(1, 2)).unwrap();
        assert!(o.row_major().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn haar_symplectic_preserves_skew_form() {
        let h = 10;
        let u = sample_haar(&EnsembleSpec::new(EnsembleKind::HaarSymplectic, 2 * h), Seed::new(3, 4)).unwrap();
        let n = 2 * h;
        let j = Mat::<c64>::from_fn(n, n, |r, c| {
            if c == r + h {
                c64::new(1.0, 0.0)
            } else if r == c + h {
                c64::new(-1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let ut_j_u = u.as_mat().transpose() * &j * u.as_mat();
        let mut r = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                r = r.max((ut_j_u[(a, b)] - j[(a, b)]).norm());
            }
        }
        assert!(r <= 1e-10, "Uᵀ J U - J = {r}");
        assert!(matches!(
            sample_haar(&EnsembleSpec::new(EnsembleKind::HaarSymplectic, 7), Seed::new(0, 0)),
            Err(Error::OddDimension { .. })
        ));
        assert!(matches!(
            sample_haar(&EnsembleSpec::new(EnsembleKind::Gue, 4), Seed::new(0, 0)),
            Err(Error::WrongKind { .. })
        ));
    }

    /// Monte Carlo mean of (Re τ, Im τ, |Tr|²) and the standard errors.
    fn trace_moments(count: u64, n: usize, draw: impl Fn(Seed) -> SquareMatrix) -> ([f64; 3], [f64; 3]) {
        let samples: Vec<[f64; 3]> = seeds(count)
            .map(|s| {
                let t = draw(s).trace();
                [t.re / n as f64, t.im / n as f64, t.norm_sqr()]
            })
            .collect();
        let c = count as f64;
        let mut mean = [0.0; 3];
        let mut se = [0.0; 3];
        for k in 0..3 {
            mean[k] = samples.iter().map(|s| s[k]).sum::<f64>() / c;
            let var = samples.iter().map(|s| (s[k] - mean[k]).powi(2)).sum::<f64>() / (c - 1.0);
            se[k] = (var / c).sqrt();
        }
        (mean, se)
    }

    #[test]
    fn haar_unitary_trace_moments() {
        let n = 200;
        let spec = EnsembleSpec::new(EnsembleKind::HaarUnitary, n);
        let (mean, se) = trace_moments(10_000, n, |s| sample_haar(&spec, s).unwrap());
        assert!(mean[0].abs() <= 0.01 && mean[1].abs() <= 0.01, "tau mean {mean:?}");
        assert!((mean[2] - 1.0).abs() <= 0.05, "|Tr|^2 mean {}", mean[2]);
        assert!((mean[2] - 1.0).abs() <= 3.0 * se[2]);
    }

    #[test]
    fn haar_left_invariance() {
        // W·U with W a fixed unitary passes the same moment tests as U.
        let n = 30;
        let spec = EnsembleSpec::new(EnsembleKind::HaarUnitary, n);
        let w = sample_haar(&spec, Seed::new(99, 99)).unwrap();
        let (mean, se) = trace_moments(10_000, n, |s| w.matmul(&sample_haar(&spec, s).unwrap()).unwrap());
        assert!(mean[0].abs() <= 3.0 * se[0] && mean[1].abs() <= 3.0 * se[1], "{mean:?} {se:?}");
        assert!((mean[2] - 1.0).abs() <= 3.0 * se[2], "{mean:?} {se:?}");
    }

    #[test]
    fn orthogonal_and_symplectic_trace_moments() {
        for (kind, n) in [(EnsembleKind::HaarOrthogonal, 20), (EnsembleKind::HaarSymplectic, 20)] {
            let spec = EnsembleSpec::new(kind, n);
            let (mean, se) = trace_moments(4_000, n, |s| sample_haar(&spec, s).unwrap());
            assert!(mean[0].abs() <= 3.0 * se[0], "{kind}: {mean:?} {se:?}");
            assert!((mean[2] - 1.0).abs() <= 3.0 * se[2], "{kind}: {mean:?} {se:?}");
        }
    }

    #[test]
    fn conjugation_of_scalar_is_exact() {
        let c = c64::new(0.3, -1.2);
        let m = conjugate_by_haar(&[c; 7], Seed::new(1, 1)).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(m.get(i, j), if i == j { c } else { c64::new(0.0, 0.0) });
            }
        }
        assert_eq!(conjugate_by_haar(&[], Seed::new(0, 0)).unwrap_err(), Error::EmptyData);
    }

    #[test]
    fn conjugation_flags() {
        let real: Vec<c64> = (0..20).map(|i| c64::new(i as f64, 0.0)).collect();
        let h = conjugate_by_haar(&real, Seed::new(4, 4)).unwrap();
        assert!(h.is_hermitian() && !h.is_unitary());
        assert!(h.hermiticity_residual() == 0.0);
        let phases: Vec<c64> = (0..20).map(|i| c64::from_polar(1.0, 0.3 * i as f64)).collect();
        let u = conjugate_by_haar(&phases, Seed::new(4, 4)).unwrap();
        assert!(u.is_unitary() && !u.is_hermitian());
        assert!(u.unitarity_residual() <= 1e-10);
    }

    #[test]
    fn permutation_structure() {
        let one = sample_permutation(1, Seed::new(0, 0)).unwrap();
        assert_eq!(one.get(0, 0), c64::new(1.0, 0.0));
        let p = sample_permutation(50, Seed::new(8, 1)).unwrap();
        for i in 0..50 {
            let row_ones = (0..50).filter(|&j| p.get(i, j) == c64::new(1.0, 0.0)).count();
            let col_ones = (0..50).filter(|&j| p.get(j, i) == c64::new(1.0, 0.0)).count();
            let row_sum: f64 = (0..50).map(|j| p.get(i, j).norm()).sum();
            assert_eq!((row_ones, col_ones, row_sum), (1, 1, 1.0));
        }
        assert!(p.is_unitary());
        assert_eq!(sample_permutation(0, Seed::new(0, 0)).unwrap_err(), Error::ZeroDimension);
    }

    #[test]
    fn spec_validation() {
        let mut spec = EnsembleSpec::conjugated_diagonal(vec![c64::new(1.0, 0.0); 3]);
        assert!(spec.validate().is_ok());
        spec.dimension = 4;
        assert!(matches!(spec.validate(), Err(Error::DimensionMismatch { .. })));
        assert_eq!(EnsembleKind::parse("haar-unitary"), Some(EnsembleKind::HaarUnitary));
        assert_eq!(EnsembleKind::parse("nope"), None);
    }
}
