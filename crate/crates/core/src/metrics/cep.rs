use super::MetricError;
use crate::geom::Point;

/// Number of actual points that must be covered: `ceil(coverage * n)`,
/// clamped to `[1, n]`. A 1e-9 slack absorbs products such as
/// `0.3 * 10 = 3.0000000000000004`.
pub fn required_coverage_count(coverage: f64, n: usize) -> usize {
    ((coverage * n as f64 - 1e-9).ceil().max(1.0) as usize).min(n)
}

/// CEP-style accuracy of a point estimate.
///
/// Circles of one common radius are drawn around every estimated point and
/// grown until at least `ceil(coverage * |actual|)` actual points lie inside
/// some circle. The returned radius is the smallest such value, which is
/// always the k-th smallest nearest-estimate distance over the actual points.
pub fn cep_measure(estimated: &[Point], actual: &[Point], coverage: f64) -> Result<f64, MetricError> {
    if estimated.is_empty() {
        return Err(MetricError::EmptyPointSet("estimated"));
    }
    if actual.is_empty() {
        return Err(MetricError::EmptyPointSet("actual"));
    }
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(MetricError::InvalidCoverage(coverage));
    }
    let mut nearest: Vec<f64> = actual
        .iter()
        .map(|a| estimated.iter().map(|e| e.distance(a)).fold(f64::INFINITY, f64::min))
        .collect();
    let k = required_coverage_count(coverage, actual.len());
    let (_, kth, _) = nearest.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}
