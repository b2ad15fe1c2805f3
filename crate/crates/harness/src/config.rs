//! Experiment configuration, read from TOML.
//!
//! ```toml
//! [experiment]
//! kind = "norm_convergence"
//! tolerance = 0.1
//! epsilon = 0.1
//! output = "out/pisier"
//!
//! [ensemble]
//! haar = "haar_unitary"
//! p = 3
//!
//! [polynomial]
//! expr = "x1 + x2 + x3"
//!
//! [grid]
//! n = [250, 500, 1000]
//!
//! [seeds]
//! master = 7
//! count = 10
//! ```
//!
//! Sections not used by an experiment may be omitted.

use std::path::Path;

use serde::{Deserialize, Serialize};
use strongfree_core::ncalg::NcPolynomial;
use strongfree_core::{EnsembleKind, Seed};

use crate::error::{HarnessError, Result};
use crate::measure_spec::MeasureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    NormConvergence,
    TraceConvergence,
    SumProductSpectrum,
    CompressionSpectrum,
    HaagerupCheck,
    RdiagonalCheck,
    PermutationContrast,
    CouplingIdentity,
    HaarInvariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Add,
    Mult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub tolerance: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub output: Option<String>,
}

fn default_epsilon() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    /// Ensemble of the random letters.
    #[serde(default)]
    pub haar: Option<String>,
    /// Number of random letters.
    #[serde(default)]
    pub p: Option<usize>,
    /// Quantile specs of the q constant (deterministic diagonal) matrices.
    #[serde(default)]
    pub constants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSection {
    #[serde(default)]
    pub expr: Option<String>,
    /// Word length for the norm-inequality experiments.
    #[serde(default)]
    pub degree: Option<usize>,
    /// `"ones"`, `"random"` or `"e1"` coefficients over the word set.
    #[serde(default)]
    pub alpha: Option<String>,
    #[serde(default)]
    pub holomorphic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SpectraSection {
    #[serde(default)]
    pub mu: Option<String>,
    #[serde(default)]
    pub nu: Option<String>,
    #[serde(default)]
    pub branch: Branch,
    /// Compression ratio.
    #[serde(default)]
    pub t: Option<f64>,
    /// Density level below which the limit law counts as zero when its
    /// support is extracted.
    #[serde(default = "default_threshold")]
    pub density_threshold: f64,
}

fn default_threshold() -> f64 {
    1e-5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSection {
    pub master: u64,
    /// Stream indices `first..first + count`.
    pub count: u64,
    #[serde(default)]
    pub first: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub polynomial: PolynomialSection,
    #[serde(default)]
    pub spectra: SpectraSection,
    pub grid: GridSection,
    pub seeds: SeedSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if !(self.experiment.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        if !(self.experiment.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if self.grid.n.is_empty() || self.grid.n.contains(&0) {
            return bad("grid must list positive dimensions");
        }
        if self.grid.n.windows(2).any(|w| w[0] >= w[1]) {
            return bad("grid dimensions must be strictly ascending");
        }
        if self.seeds.count == 0 {
            return bad("at least one seed is required");
        }
        if let Some(h) = &self.ensemble.haar {
            if EnsembleKind::parse(h).is_none() {
                return bad(&format!("unknown ensemble {h:?}"));
            }
        }
        for c in &self.ensemble.constants {
            MeasureSpec::parse(c)?;
        }
        for m in [&self.spectra.mu, &self.spectra.nu].into_iter().flatten() {
            MeasureSpec::parse(m)?;
        }
        if let Some(e) = &self.polynomial.expr {
            self.parse_polynomial_expr(e)?;
        }
        Ok(())
    }

    pub fn seeds(&self) -> Vec<Seed> {
        (self.seeds.first..self.seeds.first + self.seeds.count)
            .map(|s| Seed::new(self.seeds.master, s))
            .collect()
    }

    pub fn ensemble_kind(&self, default: EnsembleKind) -> EnsembleKind {
        self.ensemble
            .haar
            .as_deref()
            .and_then(EnsembleKind::parse)
            .unwrap_or(default)
    }

    fn parse_polynomial_expr(&self, e: &str) -> Result<NcPolynomial> {
        e.parse::<NcPolynomial>().map_err(HarnessError::from)
    }

    pub fn polynomial(&self) -> Result<NcPolynomial> {
        let e = self
            .polynomial
            .expr
            .as_deref()
            .ok_or_else(|| HarnessError::Config("missing [polynomial] expr".into()))?;
        self.parse_polynomial_expr(e)
    }

    pub fn measure(&self, which: &str) -> Result<MeasureSpec> {
        let s = match which {
            "mu" => self.spectra.mu.as_deref(),
            _ => self.spectra.nu.as_deref(),
        };
        MeasureSpec::parse(s.ok_or_else(|| HarnessError::Config(format!("missing [spectra] {which}")))?)
    }

    pub fn p(&self) -> Result<usize> {
        self.ensemble
            .p
            .ok_or_else(|| HarnessError::Config("missing [ensemble] p".into()))
    }

    pub fn output(&self) -> Option<&str> {
        self.experiment.output.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[experiment]
kind = "norm_convergence"
tolerance = 0.1

[ensemble]
haar = "haar_unitary"
p = 3

[polynomial]
expr = "x1 + x2 + x3"

[grid]
n = [100, 200]

[seeds]
master = 7
count = 3
"#;

    #[test]
    fn parses_and_round_trips() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.experiment.kind, ExperimentKind::NormConvergence);
        assert_eq!(c.seeds().len(), 3);
        assert_eq!(c.seeds()[2], Seed::new(7, 2));
        assert_eq!(c.experiment.epsilon, 0.1);
        let again = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_configs() {
        for (from, to) in [
            ("n = [100, 200]", "n = [200, 100]"),
            ("count = 3", "count = 0"),
            ("tolerance = 0.1", "tolerance = -1.0"),
            ("haar = \"haar_unitary\"", "haar = \"cauchy\""),
            ("expr = \"x1 + x2 + x3\"", "expr = \"x1 +\""),
            ("p = 3", "p = 3\nq = 1"),
        ] {
            let text = SAMPLE.replace(from, to);
            assert!(ExperimentConfig::from_toml(&text).is_err(), "{to}");
        }
    }
}
