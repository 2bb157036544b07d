//! Seeded generators and seed derivation.
//!
//! Every random choice in the crate goes through a [`ChaCha8Rng`] built
//! with [`rng_from_seed`]. Seeds for independent trials are derived from a
//! master seed with the SplitMix64 finalizer:
//!
//! ```text
//! splitmix64(x):
//!     z = x + 0x9E3779B97F4A7C15             (wrapping)
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB (wrapping)
//!     return z ^ (z >> 31)
//!
//! mix(a, b)                       = splitmix64(a ^ splitmix64(b))
//! trial_seed(master, grid, trial) = mix(mix(master, grid), trial)
//! ```
//!
//! `trial_seed` does not depend on the method being run, so every method
//! sees the same hypergraph for a given grid point and trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags for [`derive`]; keep them distinct so substreams never alias.
pub mod stream {
    pub const EDGES: u64 = 0x6564_6765;
    pub const DEGREES: u64 = 0x6465_6772;
    pub const RHS: u64 = 0x0072_6873;
    pub const ORIENT: u64 = 0x6f72_6e74;
}

#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

pub fn trial_seed(master: u64, grid_index: u64, trial_index: u64) -> u64 {
    mix(mix(master, grid_index), trial_index)
}

/// Seed of a named substream of `seed`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    mix(seed, tag)
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
