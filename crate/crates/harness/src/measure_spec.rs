//! Textual measure specs: `semicircle(v)`, `arcsine`, `uniform(a,b)`,
//! `kesten(p)`, `atoms(x:w, x:w, ...)` and `file(path)`.

use std::fmt;

use strongfree_core::freelimit::{
    arcsine_measure, kesten_measure, semicircle_measure, uniform_measure, CompactMeasure,
};
use strongfree_core::{c64, SquareMatrix};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Semicircle(f64),
    Arcsine,
    Uniform(f64, f64),
    Kesten(usize),
    Atoms(Vec<(f64, f64)>),
    File(String),
}

fn bad(spec: &str, why: &str) -> HarnessError {
    HarnessError::Config(format!("measure spec {spec:?}: {why}"))
}

fn number(spec: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| bad(spec, &format!("bad number {s:?}")))
}

impl MeasureSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| bad(spec, "missing ')'"))?;
                (n.trim(), Some(inner))
            }
            None => (s, None),
        };
        let parsed = match (name, args) {
            ("arcsine", None) => MeasureSpec::Arcsine,
            ("semicircle", None) => MeasureSpec::Semicircle(1.0),
            ("semicircle", Some(a)) => MeasureSpec::Semicircle(number(spec, a)?),
            ("uniform", Some(a)) => {
                let (lo, hi) = a.split_once(',').ok_or_else(|| bad(spec, "expected uniform(a,b)"))?;
                MeasureSpec::Uniform(number(spec, lo)?, number(spec, hi)?)
            }
            ("kesten", Some(a)) => {
                MeasureSpec::Kesten(a.trim().parse().map_err(|_| bad(spec, "expected an integer"))?)
            }
            ("atoms", Some(a)) => {
                let mut atoms = Vec::new();
                for item in a.split(',') {
                    let (x, w) = item.split_once(':').ok_or_else(|| bad(spec, "expected x:w"))?;
                    atoms.push((number(spec, x)?, number(spec, w)?));
                }
                MeasureSpec::Atoms(atoms)
            }
            ("file", Some(a)) => MeasureSpec::File(a.trim().to_string()),
            _ => return Err(bad(spec, "unknown form")),
        };
        Ok(parsed)
    }

    pub fn build(&self) -> Result<CompactMeasure> {
        Ok(match self {
            MeasureSpec::Semicircle(v) => semicircle_measure(*v)?,
            MeasureSpec::Arcsine => arcsine_measure(),
            MeasureSpec::Uniform(a, b) => uniform_measure(*a, *b)?,
            MeasureSpec::Kesten(p) => kesten_measure(*p)?,
            MeasureSpec::Atoms(a) => CompactMeasure::atomic(a)?,
            MeasureSpec::File(path) => {
                let f = std::fs::File::open(path)?;
                CompactMeasure::read(std::io::BufReader::new(f))?
            }
        })
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::Semicircle(v) => write!(f, "semicircle({v})"),
            MeasureSpec::Arcsine => write!(f, "arcsine"),
            MeasureSpec::Uniform(a, b) => write!(f, "uniform({a},{b})"),
            MeasureSpec::Kesten(p) => write!(f, "kesten({p})"),
            MeasureSpec::Atoms(a) => {
                let items: Vec<String> = a.iter().map(|(x, w)| format!("{x}:{w}")).collect();
                write!(f, "atoms({})", items.join(","))
            }
            MeasureSpec::File(p) => write!(f, "file({p})"),
        }
    }
}

/// Quantiles F⁻¹((i − ½)/N), i = 1..N: the N-point spectrum whose empirical
/// law is closest to μ in Kolmogorov distance.
pub fn quantile_spectrum(mu: &CompactMeasure, n: usize) -> Vec<f64> {
    (1..=n).map(|i| mu.quantile_at((i as f64 - 0.5) / n as f64)).collect()
}

/// Deterministic diagonal matrix with the quantile spectrum of μ.
pub fn quantile_diagonal(mu: &CompactMeasure, n: usize) -> Result<SquareMatrix> {
    Ok(SquareMatrix::from_real_diagonal(&quantile_spectrum(mu, n))?)
}

pub fn as_complex(v: &[f64]) -> Vec<c64> {
    v.iter().map(|&x| c64::new(x, 0.0)).collect()
}
