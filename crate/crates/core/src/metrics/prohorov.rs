//! Prohorov (Levy-Prohorov) distance between two gridded distributions.
//!
//! Distance between cells is the Euclidean distance between cell centers
//! divided by the diagonal of the grid extent, so it lives in `[0, 1]` like
//! the mass terms it is added to. The value is
//!
//! ```text
//! inf { eps > 0 : a(A) <= b(A^eps) + eps  for every set A of a's support cells }
//! ```
//!
//! where `A^eps` holds every cell within `eps` of some cell of `A`. The cost
//! is exponential in the support size of `a`; supports larger than
//! `max_support` are refused.

use super::{MetricError, StrengthDistribution};

pub const DEFAULT_MAX_SUPPORT: usize = 12;

const MASS_TOLERANCE: f64 = 1e-12;

struct Problem {
    mass_a: Vec<f64>,
    mass_b: Vec<f64>,
    /// Normalized distance from each `a` support cell to each `b` support cell.
    dist: Vec<Vec<f64>>,
}

impl Problem {
    /// `max_A a(A) - b(A^eps)` over all subsets of `a`'s support.
    fn worst_excess(&self, eps: f64) -> f64 {
        let s = self.mass_a.len();
        let words = self.mass_b.len().div_ceil(64).max(1);
        let reach: Vec<Vec<u64>> = self
            .dist
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; words];
                for (j, d) in row.iter().enumerate() {
                    if *d <= eps {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                }
                bits
            })
            .collect();

        let subsets = 1usize << s;
        let mut union = vec![0u64; subsets * words];
        let mut mass = vec![0.0; subsets];
        let mut worst = 0.0f64;
        for m in 1..subsets {
            let low = m.trailing_zeros() as usize;
            let rest = m & (m - 1);
            mass[m] = mass[rest] + self.mass_a[low];
            let mut covered = 0.0;
            for w in 0..words {
                let bits = union[rest * words + w] | reach[low][w];
                union[m * words + w] = bits;
                let mut b = bits;
                while b != 0 {
                    let j = w * 64 + b.trailing_zeros() as usize;
                    covered += self.mass_b[j];
                    b &= b - 1;
                }
            }
            worst = worst.max(mass[m] - covered);
        }
        worst
    }
}

pub fn prohorov_distance(
    a: &StrengthDistribution,
    b: &StrengthDistribution,
    max_support: usize,
) -> Result<f64, MetricError> {
    if a.geometry != b.geometry {
        return Err(MetricError::GridMismatch);
    }
    if !a.normalized || !b.normalized {
        return Err(MetricError::NotNormalized);
    }
    let support_a: Vec<usize> = a.support().collect();
    if support_a.len() > max_support {
        return Err(MetricError::SupportTooLarge {
            support: support_a.len(),
            max: max_support,
        });
    }
    let support_b: Vec<usize> = b.support().collect();
    let geometry = a.geometry;
    let diag = geometry.extent_diagonal();
    let dist: Vec<Vec<f64>> = support_a
        .iter()
        .map(|&i| {
            let ci = geometry.center(i);
            support_b.iter().map(|&j| ci.distance(&geometry.center(j)) / diag).collect()
        })
        .collect();
    let problem = Problem {
        mass_a: support_a.iter().map(|&i| a.values[i]).collect(),
        mass_b: support_b.iter().map(|&j| b.values[j]).collect(),
        dist,
    };

    // The excess only changes at pairwise distances, so the feasible set
    // {eps : excess(eps) <= eps} is decided by the sorted candidate list.
    let mut candidates: Vec<f64> = problem.dist.iter().flatten().copied().collect();
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // subset and neighbourhood masses are summed in different orders
    let feasible = |k: usize| problem.worst_excess(candidates[k]) <= candidates[k] + MASS_TOLERANCE;
    // the largest candidate reaches every cell, so it is always feasible
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = if lo == 0 {
        candidates[0]
    } else {
        // between the last infeasible candidate and the first feasible one the
        // excess is constant, so the infimum is that excess if it falls short
        let excess = problem.worst_excess(candidates[lo - 1]);
        candidates[lo].min(if excess <= MASS_TOLERANCE { 0.0 } else { excess })
    };
    Ok(value.min(1.0))
}
