//! Noncommutative *-polynomials with k×k matrix coefficients.
//!
//! Words are stored exactly as written: `x1 x1'` is not cancelled. The
//! `reduced` words of [`reduced_words`] are those whose adjacent letters carry
//! distinct indices.

mod text;

use std::collections::BTreeMap;

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::matrix::{MatrixFlags, SquareMatrix};

pub use text::parse_polynomial;

/// `x_index` or its adjoint. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarLetter {
    pub index: usize,
    pub starred: bool,
}

impl StarLetter {
    pub const fn plain(index: usize) -> Self {
        Self { index, starred: false }
    }

    pub const fn star(index: usize) -> Self {
        Self { index, starred: true }
    }

    pub fn adjoint(self) -> Self {
        Self {
            index: self.index,
            starred: !self.starred,
        }
    }
}

/// Ordered product of letters; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StarMonomial {
    letters: Vec<StarLetter>,
}

impl StarMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<StarLetter>) -> Self {
        Self { letters }
    }

    pub fn letter(l: StarLetter) -> Self {
        Self { letters: vec![l] }
    }

    pub fn letters(&self) -> &[StarLetter] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reversed word with every star flipped.
    pub fn adjoint(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.adjoint()).collect(),
        }
    }

    pub fn concat(&self, other: &StarMonomial) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Adjacent letters carry distinct indices.
    pub fn is_index_alternating(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].index != w[1].index)
    }
}

/// Row-major k×k complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    k: usize,
    entries: Vec<c64>,
}

impl Coefficient {
    pub fn new(k: usize, entries: Vec<c64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != k * k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                actual: entries.len(),
            });
        }
        Ok(Self { k, entries })
    }

    pub fn scalar(z: c64) -> Self {
        Self { k: 1, entries: vec![z] }
    }

    /// `z · I_k`.
    pub fn scaled_identity(k: usize, z: c64) -> Self {
        let mut entries = vec![c64::new(0.0, 0.0); k * k];
        for i in 0..k {
            entries[i * k + i] = z;
        }
        Self { k, entries }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[c64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> c64 {
        self.entries[r * self.k + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == c64::new(0.0, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let k = self.k;
        Self {
            k,
            entries: (0..k * k).map(|i| self.entries[(i % k) * k + i / k].conj()).collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn scale(&self, z: c64) -> Self {
        Self {
            k: self.k,
            entries: self.entries.iter().map(|e| e * z).collect(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            k: self.k,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    fn matmul(&self, other: &Self) -> Self {
        let k = self.k;
        let mut entries = vec![c64::new(0.0, 0.0); k * k];
        for r in 0..k {
            for c in 0..k {
                let mut s = c64::new(0.0, 0.0);
                for m in 0..k {
                    s += self.get(r, m) * other.get(m, c);
                }
                entries[r * k + c] = s;
            }
        }
        Self { k, entries }
    }

    /// Entry (0, 0) when k = 1.
    pub fn as_scalar(&self) -> Option<c64> {
        (self.k == 1).then(|| self.entries[0])
    }
}

/// Noncommutative *-polynomial over `alphabet_size` letters with k×k
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct NcPolynomial {
    alphabet_size: usize,
    coefficient_dimension: usize,
    terms: BTreeMap<StarMonomial, Coefficient>,
}

impl NcPolynomial {
    pub fn zero(alphabet_size: usize, coefficient_dimension: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if coefficient_dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            alphabet_size,
            coefficient_dimension,
            terms: BTreeMap::new(),
        })
    }

    /// Scalar polynomial Σ c·w.
    pub fn from_scalar_terms(alphabet_size: usize, terms: impl IntoIterator<Item = (c64, StarMonomial)>) -> Result<Self> {
        let mut p = Self::zero(alphabet_size, 1)?;
        for (c, w) in terms {
            p.add_term(Coefficient::scalar(c), w)?;
        }
        Ok(p)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn coefficient_dimension(&self) -> usize {
        self.coefficient_dimension
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StarMonomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &StarMonomial) -> Option<&Coefficient> {
        self.terms.get(w)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    /// Add `coeff · word`, merging with an existing term.
    pub fn add_term(&mut self, coeff: Coefficient, word: StarMonomial) -> Result<()> {
        if coeff.dim() != self.coefficient_dimension {
            return Err(Error::CoefficientMismatch {
                expected: self.coefficient_dimension,
                actual: coeff.dim(),
            });
        }
        if let Some(l) = word.letters().iter().find(|l| l.index == 0 || l.index > self.alphabet_size) {
            return Err(Error::LetterOutOfRange {
                index: l.index,
                alphabet: self.alphabet_size,
            });
        }
        let merged = match self.terms.remove(&word) {
            Some(old) => old.add(&coeff),
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(word, merged);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.coefficient_dimension != other.coefficient_dimension {
            return Err(Error::CoefficientMismatch {
                expected: self.coefficient_dimension,
                actual: other.coefficient_dimension,
            });
        }
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::DimensionMismatch {
                expected: self.alphabet_size,
                actual: other.alphabet_size,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(c.clone(), w.clone())?;
        }
        Ok(out)
    }

    /// Product with words concatenated and coefficients multiplied.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.alphabet_size, self.coefficient_dimension)?;
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(c1.matmul(c2), w1.concat(w2))?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, z: c64) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            ..*self
        };
        for (w, c) in &self.terms {
            let s = c.scale(z);
            if !s.is_zero() {
                out.terms.insert(w.clone(), s);
            }
        }
        out
    }

    /// Reverses words, flips stars and takes coefficient adjoints.
    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(w, c)| (w.adjoint(), c.adjoint())).collect(),
            ..*self
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.adjoint()
    }

    /// `(Q, R)` with `Q = (P + P*)/2`, `R = (P − P*)/(2i)`, so `P = Q + iR`.
    pub fn hermitian_parts(&self) -> (Self, Self) {
        let adj = self.adjoint();
        let q = self.add(&adj).expect("same shape").scale(c64::new(0.5, 0.0));
        let r = self
            .add(&adj.scale(c64::new(-1.0, 0.0)))
            .expect("same shape")
            .scale(c64::new(0.0, -0.5));
        (q, r)
    }

    /// `Σ coeff ⊗ w(A₁, …, A_p)` as a kN×kN matrix; starred letters are
    /// conjugate transposes and the unit word is the identity.
    pub fn evaluate(&self, matrices: &[SquareMatrix]) -> Result<SquareMatrix> {
        if matrices.len() != self.alphabet_size {
            return Err(Error::DimensionMismatch {
                expected: self.alphabet_size,
                actual: matrices.len(),
            });
        }
        let n = matrices[0].dim();
        if let Some(bad) = matrices.iter().find(|m| m.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: bad.dim(),
            });
        }
        let k = self.coefficient_dimension;
        let adjoints: Vec<Option<Mat<c64>>> = (1..=self.alphabet_size)
            .map(|i| {
                let used = self.terms.keys().any(|w| w.letters().iter().any(|l| l.index == i && l.starred));
                used.then(|| matrices[i - 1].as_mat().adjoint().to_owned())
            })
            .collect();
        let factor = |l: &StarLetter| -> &Mat<c64> {
            if l.starred {
                adjoints[l.index - 1].as_ref().expect("adjoint prepared")
            } else {
                matrices[l.index - 1].as_mat()
            }
        };
        let mut out = Mat::<c64>::zeros(k * n, k * n);
        for (w, c) in &self.terms {
            let word = match w.letters() {
                [] => None,
                [first, rest @ ..] => {
                    let mut acc = factor(first).clone();
                    for l in rest {
                        acc = &acc * factor(l);
                    }
                    Some(acc)
                }
            };
            for r in 0..k {
                for s in 0..k {
                    let z = c.get(r, s);
                    if z == c64::new(0.0, 0.0) {
                        continue;
                    }
                    match &word {
                        None => {
                            for i in 0..n {
                                out[(r * n + i, s * n + i)] += z;
                            }
                        }
                        Some(m) => {
                            for j in 0..n {
                                for i in 0..n {
                                    out[(r * n + i, s * n + j)] += z * m[(i, j)];
                                }
                            }
                        }
                    }
                }
            }
        }
        let result = SquareMatrix::from_mat_unchecked(out, MatrixFlags::NONE);
        Ok(if self.is_self_adjoint() {
            result.hermitian_part().with_flags(MatrixFlags::HERMITIAN)
        } else {
            result
        })
    }
}

impl std::fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&text::format_polynomial(self))
    }
}

impl std::str::FromStr for NcPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

/// Words of length d with adjacent indices distinct, in lexicographic index
/// order. With `holomorphic = false` every word comes in all 2^d star
/// patterns.
pub fn reduced_words(p: usize, d: usize, holomorphic: bool) -> Result<Vec<StarMonomial>> {
    if p == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if d == 0 {
        return Err(Error::OutOfDomain {
            value: 0.0,
            domain: "degree >= 1",
        });
    }
    let mut index_words: Vec<Vec<usize>> = (1..=p).map(|i| vec![i]).collect();
    for _ in 1..d {
        index_words = index_words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                (1..=p).filter(move |&i| i != last).map(move |i| {
                    let mut next = w.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    let patterns: Vec<u64> = if holomorphic { vec![0] } else { (0..1u64 << d).collect() };
    let mut out = Vec::with_capacity(index_words.len() * patterns.len());
    for w in &index_words {
        for &mask in &patterns {
            out.push(StarMonomial::new(
                w.iter()
                    .enumerate()
                    .map(|(pos, &i)| StarLetter {
                        index: i,
                        starred: mask >> (d - 1 - pos) & 1 == 1,
                    })
                    .collect(),
            ));
        }
    }
    Ok(out)
}

/// Euclidean norm of a coefficient vector.
pub fn l2_coefficient_norm(alpha: &[c64]) -> f64 {
    alpha.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
