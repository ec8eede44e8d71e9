use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided standard-normal quantile for a confidence level.
pub fn z_for_confidence(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for `successes` out of `n` trials.
///
/// `successes` may be fractional (half-credit ties). The bounds are clamped
/// so that `0 <= low <= p_hat <= high <= 1` survives rounding.
pub fn wilson_interval(successes: f64, n: usize, confidence: f64) -> (f64, f64) {
    assert!(n > 0, "wilson_interval needs at least one trial");
    let n = n as f64;
    let p = successes / n;
    let z = z_for_confidence(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = (center - half).clamp(0.0, 1.0).min(p);
    let high = (center + half).clamp(0.0, 1.0).max(p);
    (low, high)
}
