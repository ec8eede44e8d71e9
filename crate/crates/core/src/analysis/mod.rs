//! Trend and distribution summaries of error series: Lowess curves of error
//! versus time, and empirical CDFs with quantile / exceedance reads.

mod curve;
mod ecdf;
mod lowess;
pub mod svg;

pub use curve::{curve_rows, Curve, CurveKind, CurveRow};
pub use ecdf::{ecdf, exceedance_read, quantile_read, Ecdf};
pub use lowess::{lowess, LowessParams};
pub(crate) use lowess::median as median_in_place;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("smoothing fraction {frac} leaves fewer than 2 points per neighborhood (n = {n})")]
    BadFraction { frac: f64, n: usize },
    #[error("all x values are identical; no neighborhood has any spread")]
    Degenerate,
    #[error("non-finite value in input")]
    NonFinite,
}
