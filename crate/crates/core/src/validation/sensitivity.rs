//! Deceiver-insensitivity of Type-2 comparisons.
//!
//! For any true metric `d` and any snapshot,
//! `|d(S, S') - d(S, S'')| <= d(S', S'')`. So if F and G stay within
//! `delta` of each other under every deceiver, the Type-2 error gap stays
//! within `delta` too, whatever the deceiver did to `S'` and `S''`
//! individually. This check evaluates the inequality on every snapshot and
//! reports the realized `delta = max d(S', S'')` per deceiver setting.

use serde::{Deserialize, Serialize};

use super::ValidationError;
use crate::metrics::{lp_distance, MetricSpec, StrengthDistribution};

/// Floating-point allowance on the triangle inequality (sums of up to a few
/// thousand terms of magnitude <= 1).
pub const TRIANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTriple {
    pub truth: StrengthDistribution,
    pub f: StrengthDistribution,
    pub g: StrengthDistribution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeceiverRuns {
    pub label: String,
    pub snapshots: Vec<SnapshotTriple>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeceiverSensitivity {
    pub label: String,
    pub n_snapshots: usize,
    /// `max d(S', S'')` over snapshots.
    pub realized_delta: f64,
    /// `max |d(S, S') - d(S, S'')|` over snapshots.
    pub max_error_gap: f64,
    /// Largest `|d(S,S') - d(S,S'')| - d(S',S'')` seen; `<= 0` when the
    /// inequality holds exactly.
    pub max_excess: f64,
    /// Snapshots whose excess is above [`TRIANGLE_SLACK`].
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub metric: String,
    pub per_deceiver: Vec<DeceiverSensitivity>,
}

impl SensitivityReport {
    pub fn holds(&self) -> bool {
        self.per_deceiver.iter().all(|d| d.violations == 0)
    }
}

pub fn deception_sensitivity_check(
    runs: &[DeceiverRuns],
    metric: &MetricSpec,
) -> Result<SensitivityReport, ValidationError> {
    let MetricSpec::Lp { order } = *metric else {
        return Err(ValidationError::NotAMetric(metric.to_string()));
    };
    let mut per_deceiver = Vec::with_capacity(runs.len());
    for setting in runs {
        let mut summary = DeceiverSensitivity {
            label: setting.label.clone(),
            n_snapshots: setting.snapshots.len(),
            realized_delta: 0.0,
            max_error_gap: 0.0,
            max_excess: f64::NEG_INFINITY,
            violations: 0,
        };
        for s in &setting.snapshots {
            let e_f = lp_distance(&s.truth, &s.f, order)?;
            let e_g = lp_distance(&s.truth, &s.g, order)?;
            let between = lp_distance(&s.f, &s.g, order)?;
            let gap = (e_f - e_g).abs();
            let excess = gap - between;
            summary.realized_delta = summary.realized_delta.max(between);
            summary.max_error_gap = summary.max_error_gap.max(gap);
            summary.max_excess = summary.max_excess.max(excess);
            if excess > TRIANGLE_SLACK {
                summary.violations += 1;
            }
        }
        per_deceiver.push(summary);
    }
    Ok(SensitivityReport {
        metric: metric.to_string(),
        per_deceiver,
    })
}
