//! Type-1 and Type-2 validation verdicts.
//!
//! Type 1 asks whether `P(error < delta) > theta`; Type 2 whether
//! `P(error_F < error_G) > vartheta` on identical report streams. Both
//! probabilities are estimated empirically and a verdict passes only when
//! the lower Wilson bound clears the threshold.

mod sensitivity;
mod verdict;
mod wilson;

pub use sensitivity::{deception_sensitivity_check, DeceiverRuns, DeceiverSensitivity, SensitivityReport, SnapshotTriple, TRIANGLE_SLACK};
pub use verdict::{
    type1_validate, type2_validate, PairedError, SampleTag, TiePolicy, Type1Params, Type2Params, ValidationVerdict,
    VerdictKind,
};
pub use wilson::{wilson_interval, z_for_confidence};

use thiserror::Error;

use crate::metrics::MetricError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("no samples to validate")]
    Empty,
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },
    #[error("sample {index} pairs F from {f} with G from {g}")]
    Unpaired { index: usize, f: String, g: String },
    #[error("the {0} measure is not a true metric; the deception check needs an L_p metric")]
    NotAMetric(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}
