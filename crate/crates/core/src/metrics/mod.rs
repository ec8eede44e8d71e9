//! Error measures between ground truth and an estimate.
//!
//! Point-set measure: [`cep_measure`]. Distribution measures over a gridded,
//! normalized strength density: [`lp_distance`] and [`prohorov_distance`].

mod cep;
mod distribution;
mod lp;
mod prohorov;
mod series;

pub use cep::{cep_measure, required_coverage_count};
pub use distribution::{rasterize, GridGeometry, StrengthDistribution};
pub use lp::{lp_distance, LpOrder};
pub use prohorov::{prohorov_distance, DEFAULT_MAX_SUPPORT};
pub use series::{metric_series, EmptyEstimatePolicy, MetricRow, MetricSpec, SeriesPoint};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("{0} point set is empty")]
    EmptyPointSet(&'static str),
    #[error("coverage must be in (0, 1], got {0}")]
    InvalidCoverage(f64),
    #[error("point ({x}, {y}) lies outside the grid extent")]
    OutOfExtent { x: f64, y: f64 },
    #[error("cannot normalize a distribution with zero total mass")]
    ZeroMass,
    #[error("grid geometries differ")]
    GridMismatch,
    #[error("distribution is not normalized")]
    NotNormalized,
    #[error("L_p order must be >= 1, got {0}")]
    InvalidOrder(f64),
    #[error("Prohorov distance is intractable here: support of {support} cells exceeds max_support {max}")]
    SupportTooLarge { support: usize, max: usize },
    #[error("grid must have at least one cell and a positive cell size")]
    InvalidGeometry,
    #[error("ground-truth and estimate logs share no time range")]
    NoOverlap,
    #[error("no Red strength in ground truth at t = {0}")]
    EmptyGroundTruth(f64),
    #[error("estimate is empty at t = {0}")]
    EmptyEstimate(f64),
    #[error("unknown metric `{0}` (expected cep, l1, l2, linf or prohorov)")]
    UnknownMetric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    Cep,
    Lp,
    Prohorov,
}

/// A computed error value together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub kind: MetricKind,
    /// Meters for CEP, dimensionless otherwise.
    pub value: f64,
    pub spec: MetricSpec,
}
