// SPDX-License-Identifier: Apache-2.0

//! Counter-based seed derivation for reproducible realization streams.
//!
//! Realization `i` of an experiment with master seed `m` always receives
//! `stream_seed(m, i)`, so results do not depend on scheduling or on the
//! number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th stream under `master`.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Generator for one stream.
pub fn stream_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, index))
}
