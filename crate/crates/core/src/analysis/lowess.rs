//! Robust locally weighted regression (Cleveland's LOWESS).
//!
//! At each x the fit uses the `q = ceil(frac * n)` nearest points, tricube
//! weights `(1 - (d/h)^3)^3` with `h` the distance to the q-th nearest, and a
//! weighted straight-line fit. Each robustness pass multiplies in bisquare
//! weights `(1 - (r / 6s)^2)^2` of the residuals `r`, `s` being the median
//! absolute residual. The fit is evaluated at every distinct input x.

use serde::{Deserialize, Serialize};

use super::{AnalysisError, Curve, CurveKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LowessParams {
    pub frac: f64,
    pub robustness_iters: usize,
}

impl Default for LowessParams {
    fn default() -> Self {
        Self {
            frac: 0.3,
            robustness_iters: 2,
        }
    }
}

fn tricube(u: f64) -> f64 {
    if u < 1.0 {
        let t = 1.0 - u * u * u;
        t * t * t
    } else {
        0.0
    }
}

fn bisquare(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let t = 1.0 - u * u;
        t * t
    } else {
        0.0
    }
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Fit at `xs[i]` over points sorted by x.
fn local_fit(xs: &[f64], ys: &[f64], robust: &[f64], i: usize, q: usize, x_range: f64) -> f64 {
    let x0 = xs[i];
    let n = xs.len();
    let (mut lo, mut hi) = (i, i);
    while hi - lo + 1 < q {
        let left = (lo > 0).then(|| x0 - xs[lo - 1]);
        let right = (hi + 1 < n).then(|| xs[hi + 1] - x0);
        match (left, right) {
            (Some(l), Some(r)) if l <= r => lo -= 1,
            (Some(_), None) => lo -= 1,
            _ => hi += 1,
        }
    }
    let h = (x0 - xs[lo]).max(xs[hi] - x0);

    let mut sw = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let weights: Vec<f64> = (lo..=hi)
        .map(|j| {
            let d = (xs[j] - x0).abs();
            let w = if h > 0.0 { tricube(d / h) } else { 1.0 } * robust[j];
            sw += w;
            sx += w * xs[j];
            sy += w * ys[j];
            w
        })
        .collect();
    if sw <= 0.0 {
        let tied: Vec<f64> = (lo..=hi).filter(|&j| xs[j] == x0).map(|j| ys[j]).collect();
        return tied.iter().sum::<f64>() / tied.len() as f64;
    }
    let (xm, ym) = (sx / sw, sy / sw);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (w, j) in weights.iter().zip(lo..=hi) {
        let dx = xs[j] - xm;
        sxx += w * dx * dx;
        sxy += w * dx * (ys[j] - ym);
    }
    if (sxx / sw).sqrt() > 1e-3 * x_range {
        ym + sxy / sxx * (x0 - xm)
    } else {
        ym
    }
}

pub fn lowess(data: &[(f64, f64)], params: LowessParams) -> Result<Curve, AnalysisError> {
    let n = data.len();
    if n < 3 {
        return Err(AnalysisError::TooFewPoints { need: 3, got: n });
    }
    if data.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(AnalysisError::NonFinite);
    }
    let frac = params.frac;
    if !(frac > 0.0 && frac <= 1.0) || frac * (n as f64) < 2.0 {
        return Err(AnalysisError::BadFraction { frac, n });
    }
    let q = ((frac * n as f64 - 1e-9).ceil() as usize).clamp(2, n);

    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let xs: Vec<f64> = sorted.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let x_range = xs[n - 1] - xs[0];
    if x_range == 0.0 {
        return Err(AnalysisError::Degenerate);
    }

    let mut robust = vec![1.0; n];
    let mut fitted = vec![0.0; n];
    for pass in 0..=params.robustness_iters {
        for i in 0..n {
            fitted[i] = if i > 0 && xs[i] == xs[i - 1] {
                fitted[i - 1]
            } else {
                local_fit(&xs, &ys, &robust, i, q, x_range)
            };
        }
        if pass == params.robustness_iters {
            break;
        }
        let residuals: Vec<f64> = ys.iter().zip(&fitted).map(|(y, f)| y - f).collect();
        let mut abs: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
        let mean_abs = abs.iter().sum::<f64>() / n as f64;
        let s = median(&mut abs);
        // Residuals already at rounding level: nothing left to reweight.
        if 6.0 * s <= 1e-7 * mean_abs {
            break;
        }
        for (w, r) in robust.iter_mut().zip(&residuals) {
            *w = bisquare(r / (6.0 * s));
        }
    }

    let mut points: Vec<(f64, f64)> = Vec::new();
    for (x, f) in xs.iter().zip(&fitted) {
        if points.last().map(|p| p.0 != *x).unwrap_or(true) {
            points.push((*x, *f));
        }
    }
    Ok(Curve {
        kind: CurveKind::Lowess,
        points,
        engine: String::new(),
        metric: String::new(),
    })
}
