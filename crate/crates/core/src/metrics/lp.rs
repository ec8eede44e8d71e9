use serde::{Deserialize, Serialize};

use super::{MetricError, StrengthDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LpOrder {
    Finite(f64),
    Infinity,
}

fn check_inputs(a: &StrengthDistribution, b: &StrengthDistribution) -> Result<(), MetricError> {
    if a.geometry != b.geometry || a.values.len() != b.values.len() {
        return Err(MetricError::GridMismatch);
    }
    // an all-zero grid is the raster of an empty estimate and is accepted as is
    let ok = |d: &StrengthDistribution| d.normalized || d.values.iter().all(|v| *v == 0.0);
    if !ok(a) || !ok(b) {
        return Err(MetricError::NotNormalized);
    }
    Ok(())
}

/// `(sum |a - b|^p)^(1/p)` over cells, or `max |a - b|` for `p = inf`.
pub fn lp_distance(a: &StrengthDistribution, b: &StrengthDistribution, order: LpOrder) -> Result<f64, MetricError> {
    check_inputs(a, b)?;
    let diffs = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs());
    Ok(match order {
        LpOrder::Infinity => diffs.fold(0.0, f64::max),
        LpOrder::Finite(p) if !(p >= 1.0) || !p.is_finite() => return Err(MetricError::InvalidOrder(p)),
        LpOrder::Finite(1.0) => diffs.sum(),
        LpOrder::Finite(2.0) => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        LpOrder::Finite(p) => diffs.map(|d| d.powf(p)).sum::<f64>().powf(1.0 / p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::GridGeometry;

    fn two_cell(a: f64, b: f64) -> StrengthDistribution {
        StrengthDistribution {
            geometry: GridGeometry::new(2, 1, 1.0).unwrap(),
            values: vec![a, b],
            normalized: true,
        }
    }

    #[test]
    fn hand_values() {
        let (a, b) = (two_cell(1.0, 0.0), two_cell(0.0, 1.0));
        assert_eq!(lp_distance(&a, &b, LpOrder::Finite(1.0)).unwrap(), 2.0);
        assert_eq!(lp_distance(&a, &b, LpOrder::Finite(2.0)).unwrap(), 2f64.sqrt());
        assert_eq!(lp_distance(&a, &b, LpOrder::Infinity).unwrap(), 1.0);
        assert!((lp_distance(&a, &b, LpOrder::Finite(3.0)).unwrap() - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(lp_distance(&a, &a, LpOrder::Finite(1.0)).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = two_cell(1.0, 0.0);
        let other = StrengthDistribution::uniform(GridGeometry::new(1, 2, 1.0).unwrap());
        assert_eq!(lp_distance(&a, &other, LpOrder::Finite(1.0)).unwrap_err(), MetricError::GridMismatch);
        assert_eq!(lp_distance(&a, &a, LpOrder::Finite(0.5)).unwrap_err(), MetricError::InvalidOrder(0.5));
        let mut raw = two_cell(3.0, 0.0);
        raw.normalized = false;
        assert_eq!(lp_distance(&a, &raw, LpOrder::Infinity).unwrap_err(), MetricError::NotNormalized);
        let zero = StrengthDistribution::zeros(a.geometry);
        assert_eq!(lp_distance(&a, &zero, LpOrder::Finite(1.0)).unwrap(), 1.0);
    }
}
