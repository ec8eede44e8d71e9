//! Campaign runner: paired F/G runs on identical report streams, logs,
//! metric series, verdicts and figures.
//!
//! Per run, under `<out>/runs/run_NNNN/`:
//!
//! ```text
//! ground_truth.csv   time_s,entity_id,side,x_m,y_m,strength,concealed
//! reports.csv        time_s,x_m,y_m,strength,origin_kind
//! estimates_F.csv    time_s,engine,est_x_m,est_y_m,est_strength
//! estimates_G.csv    (same)
//! metrics.csv        time_s,engine,metric,value
//! ingest_digests.csv engine,sha256
//! ```
//!
//! Per campaign: `summary.json`, and from [`report`] the figure CSV/SVG
//! files and `verdicts.txt` / `verdicts.csv`.

mod campaign;
mod config;
mod report;
mod run;

pub use campaign::{
    campaign_verdicts, paired_errors, read_summary, run_campaign, summarize, write_summary, CampaignSummary,
    EcdfReads, FailedRun, LabeledVerdict, QuarterTrend, RunSummary,
};
pub use config::{CampaignConfig, ReportConfig, TICK_S};
pub use report::{report, verdict_table, ReportFiles};
pub use run::{
    run_dir_name, run_one, run_series, simulate_run, DigestRow, IngestDigests, RunArtifacts, RunLogs, RunSeries,
    Stage, ENGINE_F, ENGINE_G,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::validation::ValidationError;
use crate::worldsim::ScenarioError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot parse campaign config: {0}")]
    Parse(String),
    #[error("invalid campaign config field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("{0}")]
    Scenario(ScenarioError),
    #[error("cannot read {path}: {reason}")]
    Io { path: PathBuf, reason: String },
}

impl ConfigError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("run {run_index}, tick {tick} (t = {time_s} s), stage {stage}: {reason}")]
    Stage {
        run_index: u32,
        tick: u64,
        time_s: f64,
        stage: Stage,
        reason: String,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CampaignError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{failed} of {n_runs} runs failed (budget is 10%); first failure: {first}")]
    FailureBudget { failed: usize, n_runs: u32, first: String },
    #[error("validation: {0}")]
    Validation(#[from] ValidationError),
    #[error("analysis: {0}")]
    Analysis(String),
    #[error("i/o: {0}")]
    Io(String),
}
