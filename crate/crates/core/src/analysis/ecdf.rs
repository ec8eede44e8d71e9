use super::{AnalysisError, Curve, CurveKind};

/// An empirical CDF: one point per distinct sample value `v`, at height
/// "fraction of samples `<= v`".
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    curve: Curve,
    n: usize,
}

impl Ecdf {
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn into_curve(self) -> Curve {
        self.curve
    }

    pub fn sample_count(&self) -> usize {
        self.n
    }
}

pub fn ecdf(values: &[f64]) -> Result<Ecdf, AnalysisError> {
    if values.is_empty() {
        return Err(AnalysisError::TooFewPoints { need: 1, got: 0 });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        if i + 1 == n || sorted[i + 1] != *v {
            points.push((*v, (i + 1) as f64 / n as f64));
        }
    }
    Ok(Ecdf {
        curve: Curve {
            kind: CurveKind::Ecdf,
            points,
            engine: String::new(),
            metric: String::new(),
        },
        n,
    })
}

/// Smallest sample `x` with `F(x) >= q` (lower inverse). `q` above 1 reads
/// as the maximum.
pub fn quantile_read(ecdf: &Ecdf, q: f64) -> f64 {
    let pts = &ecdf.curve.points;
    let i = pts.partition_point(|p| p.1 < q).min(pts.len() - 1);
    pts[i].0
}

/// `F(x)`: the fraction of samples `<= x`.
pub fn exceedance_read(ecdf: &Ecdf, x: f64) -> f64 {
    let pts = &ecdf.curve.points;
    match pts.partition_point(|p| p.0 <= x) {
        0 => 0.0,
        i => pts[i - 1].1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting() {
        let e = ecdf(&[5.0, 1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!(exceedance_read(&e, 3.0), 0.6);
        assert_eq!(exceedance_read(&e, 0.5), 0.0);
        assert_eq!(exceedance_read(&e, 3.5), 0.6);
        assert_eq!(exceedance_read(&e, 99.0), 1.0);
    }

    #[test]
    fn identical_values_single_step() {
        let e = ecdf(&[7.0; 9]).unwrap();
        assert_eq!(e.curve().points, vec![(7.0, 1.0)]);
    }

    #[test]
    fn quantiles() {
        let e = ecdf(&[10.0, 20.0, 30.0, 40.0, 50.0]).unwrap();
        assert_eq!(quantile_read(&e, 0.6), 30.0);
        assert_eq!(quantile_read(&e, 1.0), 50.0);
        assert_eq!(quantile_read(&e, 0.0), 10.0);
        assert_eq!(quantile_read(&e, 0.61), 40.0);
    }

    #[test]
    fn median_of_odd_set() {
        let v = [3.0, 9.0, 1.0, 4.0, 7.0];
        let e = ecdf(&v).unwrap();
        assert!(exceedance_read(&e, 4.0) >= 0.5);
    }

    #[test]
    fn rejects_empty_and_nan() {
        assert!(ecdf(&[]).is_err());
        assert_eq!(ecdf(&[1.0, f64::NAN]).unwrap_err(), AnalysisError::NonFinite);
    }
}
