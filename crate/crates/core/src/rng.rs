//! Deterministic seed derivation.
//!
//! Every randomized routine takes a single `u64` seed and derives per-stream
//! seeds from it, so serial and parallel runs draw identical numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finaliser applied to `seed ^ stream`-style mixing.
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split_seed(seed, stream))
}

// Stream tags, kept distinct so subsystems sharing a seed stay independent.
pub(crate) const STREAM_ANCHORS: u64 = 1;
pub(crate) const STREAM_LADDER: u64 = 2;
pub(crate) const STREAM_ESTIMATOR: u64 = 3;
pub(crate) const STREAM_NET_SAMPLE: u64 = 4;
pub(crate) const STREAM_DECISION: u64 = 5;
