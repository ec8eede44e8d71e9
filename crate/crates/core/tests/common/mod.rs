#![allow(dead_code)]

use fusval::metrics::{GridGeometry, StrengthDistribution};
use fusval::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, extent: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.random::<f64>() * extent, rng.random::<f64>() * extent))
        .collect()
}

/// Normalized distribution with random mass on `support` random cells.
pub fn random_distribution(rng: &mut ChaCha8Rng, geometry: GridGeometry, support: usize) -> StrengthDistribution {
    let mut values = vec![0.0; geometry.len()];
    for _ in 0..support {
        let i = rng.random_range(0..geometry.len());
        values[i] += rng.random::<f64>() + 0.01;
    }
    let total: f64 = values.iter().sum();
    StrengthDistribution {
        geometry,
        values: values.into_iter().map(|v| v / total).collect(),
        normalized: true,
    }
}

/// Brute-force CEP: the smallest radius among all estimate-to-actual
/// distances (and 0) at which enough actual points are within that radius
/// of some estimate.
pub fn cep_brute_force(estimated: &[Point], actual: &[Point], coverage: f64) -> f64 {
    let need = ((coverage * actual.len() as f64 - 1e-9).ceil().max(1.0) as usize).min(actual.len());
    let mut radii = vec![0.0];
    for e in estimated {
        for a in actual {
            radii.push(e.distance(a));
        }
    }
    radii.sort_by(f64::total_cmp);
    for r in radii {
        let covered = actual.iter().filter(|a| estimated.iter().any(|e| e.distance(a) <= r)).count();
        if covered >= need {
            return r;
        }
    }
    unreachable!("the largest radius covers everything")
}

/// Score-test bounds found by bisection: the endpoints are the roots of
/// `(p_hat - p)^2 = z^2 p (1 - p) / n` on either side of `p_hat`.
pub fn wilson_by_bisection(successes: f64, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p_hat = successes / n;
    let f = |p: f64| (p_hat - p).powi(2) - z * z * p * (1.0 - p) / n;
    let root = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if f(mid) <= 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let low = if f(0.0) <= 0.0 { 0.0 } else { root(p_hat, 0.0) };
    let high = if f(1.0) <= 0.0 { 1.0 } else { root(p_hat, 1.0) };
    (low, high)
}

/// Direct transcription of the robust local regression, without the
/// windowing shortcut: every point gets a tricube weight from its distance
/// relative to the q-th smallest distance.
pub fn lowess_reference(data: &[(f64, f64)], frac: f64, iterations: usize) -> Vec<(f64, f64)> {
    let n = data.len();
    let q = ((frac * n as f64) - 1e-9).ceil() as usize;
    let mut pts = data.to_vec();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let range = pts[n - 1].0 - pts[0].0;
    let mut delta = vec![1.0; n];
    let mut fit = vec![0.0; n];
    for iteration in 0..=iterations {
        for i in 0..n {
            let x0 = pts[i].0;
            let mut dists: Vec<f64> = pts.iter().map(|p| (p.0 - x0).abs()).collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let h = dists[q - 1];
            let w: Vec<f64> = pts
                .iter()
                .zip(&delta)
                .map(|(p, r)| {
                    let u = (p.0 - x0).abs() / h;
                    let t = if u < 1.0 { (1.0 - u.powi(3)).powi(3) } else { 0.0 };
                    t * r
                })
                .collect();
            let s0: f64 = w.iter().sum();
            let s1: f64 = w.iter().zip(&pts).map(|(w, p)| w * p.0).sum();
            let t0: f64 = w.iter().zip(&pts).map(|(w, p)| w * p.1).sum();
            let xbar = s1 / s0;
            let ybar = t0 / s0;
            let sxx: f64 = w.iter().zip(&pts).map(|(w, p)| w * (p.0 - xbar).powi(2)).sum();
            let sxy: f64 = w.iter().zip(&pts).map(|(w, p)| w * (p.0 - xbar) * (p.1 - ybar)).sum();
            fit[i] = if (sxx / s0).sqrt() > 1e-3 * range { ybar + sxy / sxx * (x0 - xbar) } else { ybar };
        }
        if iteration == iterations {
            break;
        }
        let resid: Vec<f64> = pts.iter().zip(&fit).map(|(p, f)| p.1 - f).collect();
        let mut abs: Vec<f64> = resid.iter().map(|r| r.abs()).collect();
        abs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s = if n % 2 == 1 { abs[n / 2] } else { (abs[n / 2 - 1] + abs[n / 2]) / 2.0 };
        for (d, r) in delta.iter_mut().zip(&resid) {
            let u = r / (6.0 * s);
            *d = if u.abs() < 1.0 { (1.0 - u * u).powi(2) } else { 0.0 };
        }
    }
    pts.iter().map(|p| p.0).zip(fit).collect()
}


/// Noisy decreasing trend over a 3600 s horizon.
pub fn noisy_fixture(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let x = rng.random::<f64>() * 3600.0;
            let y = 80.0 - 0.01 * x + 15.0 * (x / 700.0).sin() + rng.random_range(-10.0..10.0);
            (x, y)
        })
        .collect()
}
