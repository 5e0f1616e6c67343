//! Seeded random streams.
//!
//! Every random draw in the crate goes through [`ChaCha8Rng`] and the two
//! helpers below, which only consume `next_u64`. The ChaCha output stream is
//! specified bit-exactly, so a given `(seed, stream)` pair produces the same
//! draws on every platform.
//!
//! Splitting rule: a run seeded with `seed` uses
//! `ChaCha8Rng::seed_from_u64(seed)` with its stream counter set to `stream`.
//! Distinct streams of the same seed are independent.

use rand::{RngCore, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw from `[0, 1)` with 53 random bits.
pub fn uniform_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `0..bound` by rejection sampling (no modulo bias).
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}
