//! Seeded random substreams.
//!
//! All randomness comes from ChaCha8 keyed by the run seed. Each stochastic
//! operation gets its own stream id built from a [`Purpose`] tag in the top
//! byte and a caller-chosen index (usually the tick number) in the low 56
//! bits, so any single step can be replayed in isolation:
//!
//! ```text
//! rng = ChaCha8Rng::seed_from_u64(seed); rng.set_stream((purpose << 56) | index)
//! ```

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// What a substream is used for. The discriminant is the stream tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Placement = 1,
    Deception = 2,
    Observation = 3,
    InitialIntel = 4,
    Attrition = 5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStreams {
    seed: u64,
}

impl SeedStreams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream(&self, purpose: Purpose, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((purpose as u64) << 56) | (index & 0x00ff_ffff_ffff_ffff));
        rng
    }
}

/// Uniform `f64` in `[0, 1)` from the top 53 bits of one `u64` draw.
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Poisson draw by sequential inverse-transform search over one uniform.
///
/// Consumes exactly one `u64`. Returns the smallest `k` with
/// `F(k) >= u`, accumulating `p(k) = p(k-1) * lambda / k` from
/// `p(0) = exp(-lambda)`. Suitable for small rates only (`lambda <= 100`).
pub fn poisson<R: RngCore + ?Sized>(rng: &mut R, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        // still consume the draw so stream positions do not depend on the rate
        let _ = rng.next_u64();
        return 0;
    }
    let u = unit_f64(rng);
    let mut k = 0u64;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= lambda / k as f64;
        if p == 0.0 {
            break;
        }
        cdf += p;
    }
    k
}

/// Standard normal draw.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand_distr::StandardNormal)
}
