//! Closed-form limit norms for the polynomial shapes that have one.

use std::fmt;

use strongfree_core::freelimit::{akemann_ostrand_norm, fell_norm, kesten_norm, lehner_norm};
use strongfree_core::ncalg::{l2_coefficient_norm, Coefficient, NcPolynomial, StarLetter, StarMonomial};
use strongfree_core::{c64, EnsembleKind};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Σ aᵢ sᵢ over free semicirculars: 2‖a‖₂.
    SemicircularSum,
    /// Σ aᵢ uᵢ with scalar aᵢ.
    AkemannOstrand,
    /// c Σ (uᵢ + uᵢ*).
    Kesten,
    /// Σ aᵢ ⊗ uᵢ with unitary aᵢ.
    Fell,
    /// a₀ ⊗ 1 + Σ aᵢ ⊗ uᵢ with Hermitian aᵢ.
    Lehner,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::SemicircularSum => "semicircular_sum",
            OracleKind::AkemannOstrand => "akemann_ostrand",
            OracleKind::Kesten => "kesten",
            OracleKind::Fell => "fell",
            OracleKind::Lehner => "lehner",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOracle {
    pub kind: OracleKind,
    pub value: f64,
}

const UNITARY_TOL: f64 = 1e-10;

fn single_letter(w: &StarMonomial) -> Option<StarLetter> {
    match w.letters() {
        [l] => Some(*l),
        _ => None,
    }
}

fn is_unitary(c: &Coefficient) -> bool {
    let k = c.dim();
    (0..k).all(|r| {
        (0..k).all(|s| {
            let z: c64 = (0..k).map(|j| c.get(r, j) * c.get(s, j).conj()).sum();
            let target = if r == s { 1.0 } else { 0.0 };
            (z - c64::new(target, 0.0)).norm() <= UNITARY_TOL
        })
    })
}

/// Linear part of a polynomial of degree at most one: (unit coefficient,
/// per-letter coefficients, whether any letter is starred).
struct Linear {
    unit: Option<Coefficient>,
    plain: Vec<Option<Coefficient>>,
    starred: Vec<Option<Coefficient>>,
}

fn linear_parts(poly: &NcPolynomial) -> Option<Linear> {
    let p = poly.alphabet_size();
    let mut out = Linear {
        unit: None,
        plain: vec![None; p],
        starred: vec![None; p],
    };
    for (w, c) in poly.terms() {
        if w.is_unit() {
            out.unit = Some(c.clone());
            continue;
        }
        let l = single_letter(w)?;
        let slot = if l.starred { &mut out.starred } else { &mut out.plain };
        slot[l.index - 1] = Some(c.clone());
    }
    Some(out)
}

fn no_oracle(poly: &NcPolynomial, kind: EnsembleKind) -> HarnessError {
    HarnessError::NoOracle(format!("{poly} over {kind}"))
}

/// Limit of ‖P(X₁, …, X_p)‖ for the supported shapes, checked in the order
/// semicircular sum (GUE letters), Akemann–Ostrand, Kesten, Fell, Lehner.
pub fn norm_oracle(poly: &NcPolynomial, kind: EnsembleKind) -> Result<NormOracle> {
    let lin = linear_parts(poly).ok_or_else(|| no_oracle(poly, kind))?;
    let k = poly.coefficient_dimension();
    let any_starred = lin.starred.iter().any(Option::is_some);
    let plain: Vec<&Coefficient> = lin.plain.iter().flatten().collect();
    let ok = |kind: OracleKind, value: f64| Ok(NormOracle { kind, value });

    if kind == EnsembleKind::Gue {
        // Letters are self-adjoint, so x and x' are the same letter.
        if k != 1 || lin.unit.is_some() {
            return Err(no_oracle(poly, kind));
        }
        let mut a = Vec::new();
        for i in 0..poly.alphabet_size() {
            let s = lin.plain[i].iter().chain(&lin.starred[i]).map(|c| c.get(0, 0)).sum::<c64>();
            if s.im != 0.0 {
                return Err(no_oracle(poly, kind));
            }
            a.push(s);
        }
        return ok(OracleKind::SemicircularSum, 2.0 * l2_coefficient_norm(&a));
    }
    if !matches!(
        kind,
        EnsembleKind::HaarUnitary | EnsembleKind::HaarOrthogonal | EnsembleKind::HaarSymplectic
    ) {
        return Err(no_oracle(poly, kind));
    }

    if k == 1 && lin.unit.is_none() && !any_starred && !plain.is_empty() {
        let a: Vec<c64> = plain.iter().map(|c| c.get(0, 0)).collect();
        return ok(OracleKind::AkemannOstrand, akemann_ostrand_norm(&a)?);
    }
    if k == 1 && lin.unit.is_none() {
        // c Σ (xᵢ + xᵢ') over every letter, c real.
        let p = poly.alphabet_size();
        let all: Option<Vec<c64>> = (0..p)
            .flat_map(|i| [&lin.plain[i], &lin.starred[i]])
            .map(|c| c.as_ref().map(|c| c.get(0, 0)))
            .collect();
        if let Some(all) = all {
            let c = all[0];
            if c.im == 0.0 && all.iter().all(|z| *z == c) && p >= 1 {
                return ok(OracleKind::Kesten, c.re.abs() * kesten_norm(p)?);
            }
        }
        return Err(no_oracle(poly, kind));
    }
    if !any_starred && lin.unit.is_none() && !plain.is_empty() && plain.iter().all(|c| is_unitary(c)) {
        // Unitary coefficients are absorbed: the norm is that of Σ uᵢ.
        if plain.len() >= 2 {
            return ok(OracleKind::Fell, fell_norm(plain.len())?);
        }
        return ok(OracleKind::Fell, 1.0);
    }
    if !any_starred {
        let zero = Coefficient::scaled_identity(k, c64::new(0.0, 0.0));
        let mut coeffs = vec![lin.unit.clone().unwrap_or_else(|| zero.clone())];
        coeffs.extend(lin.plain.iter().map(|c| c.clone().unwrap_or_else(|| zero.clone())));
        if coeffs.iter().all(Coefficient::is_hermitian) {
            return ok(OracleKind::Lehner, lehner_norm(&coeffs)?);
        }
    }
    Err(no_oracle(poly, kind))
}
