//! Deterministic RNG stream derivation.
//!
//! Every random draw in the crate comes from a ChaCha12 stream derived from a
//! scenario seed and a stream label. Streams are independent of how many other
//! streams exist, so adding a node to a scenario never reshuffles the draws of
//! the nodes that were already there.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Stream label for the simulation harness itself (slot bookkeeping, episode draws).
pub const HARNESS_STREAM: u64 = 0;

/// Stream label for node `n`'s private draws (values, arm picks).
pub fn node_stream(n: usize) -> u64 {
    n as u64 + 1
}

// SplitMix64 finalizer: bijective on u64, scrambles low-entropy seeds.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the RNG for (`seed`, `stream`). The same pair always yields the
/// same stream; distinct pairs yield statistically independent streams.
pub fn stream(seed: u64, stream: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(splitmix(seed) ^ splitmix(stream.wrapping_mul(0xA24B_AED4_963E_E407)))
}

/// Sub-stream for indexed replicas (episode `i`, run `i`) of a labelled stream.
pub fn substream(seed: u64, label: u64, index: u64) -> ChaCha12Rng {
    stream(seed, label ^ splitmix(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Scalar seed for replica `index` of a labelled sub-experiment, for APIs that
/// take a seed rather than an RNG. Distinct (seed, label, index) triples give
/// unrelated values.
pub fn derive_seed(seed: u64, label: u64, index: u64) -> u64 {
    splitmix(splitmix(seed) ^ splitmix(label) ^ splitmix(index.wrapping_add(0xD6E8_FEB8_6659_FD93)))
}
