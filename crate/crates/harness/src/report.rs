//! Trial records, aggregation and verdicts, and the on-disk report.
//!
//! A report directory holds
//!
//! - `trials.csv`: one row per [`TrialRecord`], columns
//!   `statistic,dimension,seed_master,seed_stream,measured,oracle,pass`;
//! - `timings.csv`: `dimension,seed_master,seed_stream,wall_seconds`, one row
//!   per trial (kept apart so that `trials.csv` is reproducible byte for byte);
//! - `manifest.json`: config echo, code version, seeds, rules, aggregates,
//!   verdict and the SHA-256 of `trials.csv`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use strongfree_core::Seed;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

pub const TRIALS_FILE: &str = "trials.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub statistic: String,
    pub dimension: usize,
    pub seed_master: u64,
    pub seed_stream: u64,
    pub measured: f64,
    pub oracle: Option<f64>,
    pub pass: bool,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl TrialRecord {
    pub fn seed(&self) -> Seed {
        Seed::new(self.seed_master, self.seed_stream)
    }

    pub fn deviation(&self) -> Option<f64> {
        self.oracle.map(|o| self.measured - o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Median of |measured − oracle| at the largest N is at most `tolerance`.
    MedianAbsDeviation { tolerance: f64 },
    /// Every trial at the largest N passes.
    AllTrials,
    /// At least `minimum` of the trials at the largest N pass.
    PassFraction { minimum: f64 },
    /// |mean(measured) − oracle| ≤ `multiple` standard errors at the largest N.
    MeanWithinStdErr { multiple: f64 },
    /// Medians of `measured` strictly decrease along the grid.
    MedianDecreasing,
    /// Recorded, never judged.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticRule {
    pub statistic: String,
    #[serde(flatten)]
    pub rule: Rule,
}

impl StatisticRule {
    pub fn new(statistic: &str, rule: Rule) -> Self {
        Self {
            statistic: statistic.to_string(),
            rule,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub statistic: String,
    pub dimension: usize,
    pub count: usize,
    pub median: f64,
    pub iqr: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Median of |measured − oracle|, when every record has an oracle.
    pub median_abs_deviation: Option<f64>,
    /// Mean oracle value, when every record has one.
    pub oracle: Option<f64>,
    pub pass_fraction: f64,
}

/// Least-squares slope of log(median |deviation|) against log N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub statistic: String,
    pub slope: f64,
    /// Median |deviation| never increases along the grid.
    pub monotone: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No judged statistic produced any record.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticVerdict {
    pub statistic: String,
    #[serde(flatten)]
    pub rule: Rule,
    pub value: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    pub code_version: String,
    pub seeds: Vec<Seed>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
    pub rules: Vec<StatisticRule>,
    pub aggregates: Vec<Aggregate>,
    pub slopes: Vec<SlopeFit>,
    pub statistics: Vec<StatisticVerdict>,
    pub notices: Vec<String>,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    pub fn new(config: ExperimentConfig, records: Vec<TrialRecord>, rules: Vec<StatisticRule>, notices: Vec<String>) -> Self {
        let aggregates = aggregate(&records);
        let slopes = slopes(&aggregates);
        let (statistics, verdict) = evaluate(&aggregates, &records, &rules);
        Self {
            seeds: config.seeds(),
            config,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            records,
            rules,
            aggregates,
            slopes,
            statistics,
            notices,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn aggregate(&self, statistic: &str, dimension: usize) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.statistic == statistic && a.dimension == dimension)
    }

    pub fn statistic(&self, statistic: &str) -> Option<&StatisticVerdict> {
        self.statistics.iter().find(|s| s.statistic == statistic)
    }

    /// One line per judged statistic.
    pub fn summary(&self) -> String {
        let mut out = format!("{:?}: {:?}\n", self.config.experiment.kind, self.verdict);
        for s in &self.statistics {
            let value = s.value.map_or("-".to_string(), |v| format!("{v:.6}"));
            out.push_str(&format!(
                "  {:<22} {:<26} value {:<12} {}\n",
                s.statistic,
                rule_label(&s.rule),
                value,
                if s.pass { "pass" } else { "FAIL" }
            ));
        }
        for n in &self.notices {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn rule_label(rule: &Rule) -> String {
    match rule {
        Rule::MedianAbsDeviation { tolerance } => format!("median|dev| <= {tolerance}"),
        Rule::AllTrials => "all trials".into(),
        Rule::PassFraction { minimum } => format!("pass fraction >= {minimum}"),
        Rule::MeanWithinStdErr { multiple } => format!("mean within {multiple} s.e."),
        Rule::MedianDecreasing => "median decreasing".into(),
        Rule::Info => "info".into(),
    }
}

/// Median of a sorted slice.
fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let h = q * (v.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Per (statistic, dimension) aggregates. Every value is a function of the
/// sorted sample, so the result does not depend on record order.
pub fn aggregate(records: &[TrialRecord]) -> Vec<Aggregate> {
    let mut groups: BTreeMap<(&str, usize), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.statistic.as_str(), r.dimension)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((statistic, dimension), rs)| {
            let values = sorted(rs.iter().map(|r| r.measured).collect());
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = if n > 1 {
                values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            let with_oracle = rs.iter().all(|r| r.oracle.is_some());
            let (median_abs_deviation, oracle) = if with_oracle {
                let dev = sorted(rs.iter().map(|r| r.deviation().unwrap().abs()).collect());
                let oracles = sorted(rs.iter().map(|r| r.oracle.unwrap()).collect());
                (Some(median_sorted(&dev)), Some(oracles.iter().sum::<f64>() / n as f64))
            } else {
                (None, None)
            };
            Aggregate {
                statistic: statistic.to_string(),
                dimension,
                count: n,
                median: median_sorted(&values),
                iqr: quantile_sorted(&values, 0.75) - quantile_sorted(&values, 0.25),
                mean,
                stderr: (var / n as f64).sqrt(),
                median_abs_deviation,
                oracle,
                pass_fraction: rs.iter().filter(|r| r.pass).count() as f64 / n as f64,
            }
        })
        .collect()
}

fn slopes(aggregates: &[Aggregate]) -> Vec<SlopeFit> {
    let mut by_stat: BTreeMap<&str, Vec<&Aggregate>> = BTreeMap::new();
    for a in aggregates {
        by_stat.entry(a.statistic.as_str()).or_default().push(a);
    }
    by_stat
        .into_iter()
        .filter_map(|(statistic, aggs)| {
            let pts: Vec<(f64, f64)> = aggs
                .iter()
                .filter_map(|a| a.median_abs_deviation.filter(|d| *d > 0.0).map(|d| ((a.dimension as f64).ln(), d.ln())))
                .collect();
            if pts.len() < 2 {
                return None;
            }
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let devs: Vec<f64> = aggs.iter().filter_map(|a| a.median_abs_deviation).collect();
            Some(SlopeFit {
                statistic: statistic.to_string(),
                slope: sxy / sxx,
                monotone: devs.windows(2).all(|w| w[1] <= w[0]),
            })
        })
        .collect()
}

/// Apply each rule to the aggregates; the verdict is pass iff every judged
/// statistic passes.
pub fn evaluate(
    aggregates: &[Aggregate],
    records: &[TrialRecord],
    rules: &[StatisticRule],
) -> (Vec<StatisticVerdict>, Verdict) {
    let mut out = Vec::new();
    let mut judged = 0;
    let mut all_pass = true;
    for sr in rules {
        let mine: Vec<&Aggregate> = aggregates.iter().filter(|a| a.statistic == sr.statistic).collect();
        let Some(last) = mine.iter().max_by_key(|a| a.dimension) else {
            out.push(StatisticVerdict {
                statistic: sr.statistic.clone(),
                rule: sr.rule,
                value: None,
                pass: sr.rule == Rule::Info,
            });
            continue;
        };
        let (value, pass) = match sr.rule {
            Rule::MedianAbsDeviation { tolerance } => {
                let v = last.median_abs_deviation;
                (v, v.is_some_and(|v| v <= tolerance))
            }
            Rule::AllTrials => {
                let failures = records
                    .iter()
                    .filter(|r| r.statistic == sr.statistic && r.dimension == last.dimension && !r.pass)
                    .count();
                (Some(failures as f64), failures == 0)
            }
            Rule::PassFraction { minimum } => (Some(last.pass_fraction), last.pass_fraction >= minimum),
            Rule::MeanWithinStdErr { multiple } => match last.oracle {
                Some(o) => {
                    let z = if last.stderr > 0.0 {
                        (last.mean - o).abs() / last.stderr
                    } else if last.mean == o {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    (Some(z), z <= multiple)
                }
                None => (None, false),
            },
            Rule::MedianDecreasing => {
                let mut m: Vec<&&Aggregate> = mine.iter().collect();
                m.sort_by_key(|a| a.dimension);
                let dec = m.windows(2).all(|w| w[1].median < w[0].median);
                (Some(last.median), dec)
            }
            Rule::Info => (Some(last.median), true),
        };
        if sr.rule != Rule::Info {
            judged += 1;
            all_pass &= pass;
        }
        out.push(StatisticVerdict {
            statistic: sr.statistic.clone(),
            rule: sr.rule,
            value,
            pass,
        });
    }
    let verdict = if judged == 0 || out.iter().filter(|s| s.rule != Rule::Info).all(|s| s.value.is_none()) {
        Verdict::Skipped
    } else if all_pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    (out, verdict)
}

pub fn trials_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["statistic", "dimension", "seed_master", "seed_stream", "measured", "oracle", "pass"])?;
    for r in records {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))
}

pub fn read_trials_csv(bytes: &[u8]) -> Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_reader(bytes);
    Ok(r.deserialize().collect::<std::result::Result<Vec<TrialRecord>, _>>()?)
}

fn timings_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["dimension", "seed_master", "seed_stream", "wall_seconds"])?;
    let mut seen = std::collections::BTreeSet::new();
    for r in records {
        if seen.insert((r.dimension, r.seed_master, r.seed_stream)) {
            w.write_record([
                r.dimension.to_string(),
                r.seed_master.to_string(),
                r.seed_stream.to_string(),
                format!("{:.6}", r.wall_seconds),
            ])?;
        }
    }
    w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub report: ConvergenceReport,
    pub trials_file: String,
    pub trials_sha256: String,
    pub trial_rows: usize,
}

/// Write `trials.csv`, `timings.csv` and `manifest.json` under `dir`.
/// Returns the manifest path.
pub fn emit_report(report: &ConvergenceReport, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let trials = trials_csv(&report.records)?;
    fs::write(dir.join(TRIALS_FILE), &trials)?;
    fs::write(dir.join(TIMINGS_FILE), timings_csv(&report.records)?)?;
    let manifest = Manifest {
        report: report.clone(),
        trials_file: TRIALS_FILE.to_string(),
        trials_sha256: sha256_hex(&trials),
        trial_rows: report.records.len(),
    };
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(path)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub digest_matches: bool,
    pub verdict_matches: bool,
    /// Digest of a fresh run from the manifest config, when requested.
    pub rerun_matches: Option<bool>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.digest_matches && self.verdict_matches && self.rerun_matches != Some(false)
    }
}

/// Check a report directory: the CSV digest, the verdict recomputed from the
/// CSV rows and, with `rerun`, the digest of a fresh run of the echoed config.
pub fn verify(manifest_path: impl AsRef<Path>, rerun: bool) -> Result<Verification> {
    let path = manifest_path.as_ref();
    let manifest = read_manifest(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let bytes = fs::read(dir.join(&manifest.trials_file))?;
    let digest_matches = sha256_hex(&bytes) == manifest.trials_sha256;
    let records = read_trials_csv(&bytes)?;
    let aggregates = aggregate(&records);
    let (_, verdict) = evaluate(&aggregates, &records, &manifest.report.rules);
    let verdict_matches = verdict == manifest.report.verdict && records.len() == manifest.trial_rows;
    let rerun_matches = if rerun {
        let fresh = crate::experiments::run_experiment(&manifest.report.config)?;
        Some(sha256_hex(&trials_csv(&fresh.records)?) == manifest.trials_sha256)
    } else {
        None
    };
    Ok(Verification {
        digest_matches,
        verdict_matches,
        rerun_matches,
    })
}
