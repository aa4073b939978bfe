//! Seeded random streams.
//!
//! Every random source in the crate is a `ChaCha8Rng` keyed by a 64-bit seed
//! and a stream label. Instance generation, the walk, and rounding use
//! distinct labels so each can be reseeded independently of the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream used by the walk itself.
pub const WALK_STREAM: u64 = 0x7761_6c6b; // "walk"
/// Stream used by instance generators.
pub const GENERATOR_STREAM: u64 = 0x0067_656e; // "gen"
/// Stream used by randomized rounding.
pub const ROUNDING_STREAM: u64 = 0x726f_756e; // "roun"
/// Stream used for baselines and other experiment-side sampling.
pub const BASELINE_STREAM: u64 = 0x6261_7365; // "base"

/// SplitMix64 finalizer applied to `seed` offset by `index` golden-ratio steps.
///
/// Used to derive per-retry and per-round seeds from one user-facing seed.
pub fn mix64(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream(seed: u64, label: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label);
    rng
}
