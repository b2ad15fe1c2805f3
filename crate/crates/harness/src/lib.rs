//! Monte Carlo experiments comparing finite-N random matrix statistics with
//! their free-probability limits, and the reports they produce.

pub mod config;
pub mod error;
pub mod experiments;
pub mod measure_spec;
pub mod oracle;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::{HarnessError, Result};
pub use experiments::{run_experiment, run_experiment_with};
pub use report::{emit_report, verify, ConvergenceReport, TrialRecord, Verdict};
