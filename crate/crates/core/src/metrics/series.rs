use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    cep_measure, lp_distance, prohorov_distance, rasterize, GridGeometry, LpOrder, MetricError, MetricKind,
    StrengthDistribution, DEFAULT_MAX_SUPPORT,
};
use crate::fusion::log::{snapshots_from_rows, EstimateRow};
use crate::geom::Point;
use crate::worldsim::log::GroundTruthRow;
use crate::worldsim::Side;

/// Which error measure to compute, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    Cep { coverage: f64 },
    Lp { order: LpOrder },
    Prohorov { max_support: usize },
}

impl Default for MetricSpec {
    fn default() -> Self {
        MetricSpec::Cep { coverage: 0.5 }
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSpec::Cep { .. } => f.write_str("cep"),
            MetricSpec::Lp { order: LpOrder::Infinity } => f.write_str("linf"),
            MetricSpec::Lp { order: LpOrder::Finite(p) } => write!(f, "l{p}"),
            MetricSpec::Prohorov { .. } => f.write_str("prohorov"),
        }
    }
}

/// Parses `cep`, `l1`, `l2`, `linf`, `l<p>` or `prohorov` with default
/// parameters; see [`MetricSpec::with_coverage`].
impl FromStr for MetricSpec {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "cep" => MetricSpec::Cep { coverage: 0.5 },
            "linf" => MetricSpec::Lp { order: LpOrder::Infinity },
            "prohorov" => MetricSpec::Prohorov {
                max_support: DEFAULT_MAX_SUPPORT,
            },
            other => match other.strip_prefix('l').and_then(|p| p.parse::<f64>().ok()) {
                Some(p) if p >= 1.0 && p.is_finite() => MetricSpec::Lp { order: LpOrder::Finite(p) },
                _ => return Err(MetricError::UnknownMetric(s.to_string())),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyEstimatePolicy {
    Error,
    /// Use the worst natural value: the extent diagonal for CEP, the norm of
    /// the truth alone for L_p, 1 for Prohorov.
    #[default]
    Substitute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub time_s: f64,
    pub value: f64,
    /// The estimate was empty and `value` came from the substitution policy.
    pub substituted: bool,
}

/// `metrics.csv`: `time_s,engine,metric,value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub time_s: f64,
    pub engine: String,
    pub metric: String,
    pub value: f64,
}

impl MetricSpec {
    pub fn kind(&self) -> MetricKind {
        match self {
            MetricSpec::Cep { .. } => MetricKind::Cep,
            MetricSpec::Lp { .. } => MetricKind::Lp,
            MetricSpec::Prohorov { .. } => MetricKind::Prohorov,
        }
    }

    pub fn with_coverage(self, coverage: f64) -> Self {
        match self {
            MetricSpec::Cep { .. } => MetricSpec::Cep { coverage },
            other => other,
        }
    }

    pub fn with_max_support(self, max_support: usize) -> Self {
        match self {
            MetricSpec::Prohorov { .. } => MetricSpec::Prohorov { max_support },
            other => other,
        }
    }

    /// Error between `actual` and `estimated` `(position, strength)` sets.
    /// CEP ignores strength; the distribution metrics rasterize onto `geometry`.
    pub fn evaluate(
        &self,
        actual: &[(Point, f64)],
        estimated: &[(Point, f64)],
        geometry: GridGeometry,
    ) -> Result<f64, MetricError> {
        if estimated.is_empty() {
            return Err(MetricError::EmptyPointSet("estimated"));
        }
        if actual.is_empty() {
            return Err(MetricError::EmptyPointSet("actual"));
        }
        match *self {
            MetricSpec::Cep { coverage } => {
                let est: Vec<Point> = estimated.iter().map(|(p, _)| *p).collect();
                let act: Vec<Point> = actual.iter().map(|(p, _)| *p).collect();
                cep_measure(&est, &act, coverage)
            }
            MetricSpec::Lp { order } => {
                let (a, e) = distributions(actual, estimated, geometry)?;
                lp_distance(&a, &e, order)
            }
            MetricSpec::Prohorov { max_support } => {
                let (a, e) = distributions(actual, estimated, geometry)?;
                // the distance is symmetric, so enumerate over the smaller support
                if e.support_size() <= a.support_size() {
                    prohorov_distance(&e, &a, max_support)
                } else {
                    prohorov_distance(&a, &e, max_support)
                }
            }
        }
    }

    /// Value charged when the estimate is empty.
    pub fn empty_estimate_value(&self, actual: &[(Point, f64)], geometry: GridGeometry) -> Result<f64, MetricError> {
        match *self {
            MetricSpec::Cep { .. } => Ok(geometry.extent_diagonal()),
            MetricSpec::Lp { order } => {
                let a = rasterize(actual, geometry, true)?;
                lp_distance(&a, &StrengthDistribution::zeros(geometry), order)
            }
            MetricSpec::Prohorov { .. } => Ok(1.0),
        }
    }

    pub fn evaluate_with_policy(
        &self,
        actual: &[(Point, f64)],
        estimated: &[(Point, f64)],
        geometry: GridGeometry,
        policy: EmptyEstimatePolicy,
    ) -> Result<(f64, bool), MetricError> {
        match self.evaluate(actual, estimated, geometry) {
            Err(MetricError::EmptyPointSet("estimated")) if policy == EmptyEstimatePolicy::Substitute => {
                Ok((self.empty_estimate_value(actual, geometry)?, true))
            }
            other => other.map(|v| (v, false)),
        }
    }
}

fn distributions(
    actual: &[(Point, f64)],
    estimated: &[(Point, f64)],
    geometry: GridGeometry,
) -> Result<(StrengthDistribution, StrengthDistribution), MetricError> {
    let a = rasterize(actual, geometry, true)?;
    let e = rasterize(estimated, geometry, false)?;
    if !(e.total() > 0.0) {
        return Err(MetricError::EmptyPointSet("estimated"));
    }
    Ok((a, e.normalized()?))
}

/// Red entities with non-zero strength, grouped by log time.
pub(crate) fn truth_by_time(rows: &[GroundTruthRow]) -> Vec<(f64, Vec<(Point, f64)>)> {
    let mut out: Vec<(f64, Vec<(Point, f64)>)> = Vec::new();
    for r in rows {
        if out.last().map(|(t, _)| *t != r.time_s).unwrap_or(true) {
            out.push((r.time_s, Vec::new()));
        }
        if r.side == Side::Red && r.strength > 0 {
            out.last_mut().unwrap().1.push((Point::new(r.x_m, r.y_m), r.strength as f64));
        }
    }
    out
}

/// Evaluates `spec` at every `tick_s` tick of the ground-truth log.
///
/// Actual locations are all live Red entities, concealed or not. The
/// estimate at tick `t` is the engine's latest snapshot at or before `t`;
/// before its first snapshot the engine's prior (no locations) is used.
pub fn metric_series(
    truth: &[GroundTruthRow],
    estimates: &[EstimateRow],
    spec: &MetricSpec,
    geometry: GridGeometry,
    tick_s: f64,
    policy: EmptyEstimatePolicy,
) -> Result<Vec<SeriesPoint>, MetricError> {
    let truth = truth_by_time(truth);
    let snapshots = snapshots_from_rows(estimates);
    let (Some(first_truth), Some(last_truth)) = (truth.first(), truth.last()) else {
        return Err(MetricError::NoOverlap);
    };
    let (Some(first_est), Some(last_est)) = (snapshots.first(), snapshots.last()) else {
        return Err(MetricError::NoOverlap);
    };
    if first_est.time_s > last_truth.0 || last_est.time_s < first_truth.0 {
        return Err(MetricError::NoOverlap);
    }

    let t0 = first_truth.0;
    let mut out = Vec::new();
    let mut next = 0usize;
    for (t, actual) in &truth {
        let steps = (t - t0) / tick_s;
        if (steps - steps.round()).abs() > 1e-9 {
            continue;
        }
        while next < snapshots.len() && snapshots[next].time_s <= *t {
            next += 1;
        }
        let current = next.checked_sub(1);
        if actual.is_empty() {
            return Err(MetricError::EmptyGroundTruth(*t));
        }
        let estimated: Vec<(Point, f64)> = current
            .map(|i| snapshots[i].locations.iter().map(|l| (l.position, l.strength)).collect())
            .unwrap_or_default();
        let (value, substituted) = spec
            .evaluate_with_policy(actual, &estimated, geometry, policy)
            .map_err(|e| match e {
                MetricError::EmptyPointSet("estimated") => MetricError::EmptyEstimate(*t),
                other => other,
            })?;
        out.push(SeriesPoint {
            time_s: *t,
            value,
            substituted,
        });
    }
    Ok(out)
}
