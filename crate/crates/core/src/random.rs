//! Seeding and the random test families shared by the harnesses.
//!
//! Every trial draws from its own ChaCha stream whose seed is derived from the master seed
//! and the trial index, so results do not depend on scheduling order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trig::TrigPoly;

/// Seed used when neither a flag nor `FDL_SEED` provides one.
pub const DEFAULT_SEED: u64 = 20_110_921;

/// Derives the seed of sub-stream `index` from `master` (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Trigonometric polynomial with independent ±1 coefficients on every frequency of `lo..=hi`.
pub fn rademacher_poly<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> TrigPoly {
    TrigPoly::from_coeffs((lo..=hi).map(|k| {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        (k, Complex64::new(sign, 0.0))
    }))
}

/// Uniform point of [0, 1).
pub fn uniform_point<R: Rng>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}
