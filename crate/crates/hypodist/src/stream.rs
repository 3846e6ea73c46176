//! Deterministic derivation of random substreams.
//!
//! Every randomized routine in this crate takes an explicit [`Seed`] and
//! derives the generators it needs from it, so results are reproducible
//! across runs, platforms and thread counts. Substreams are keyed by index
//! paths (replication, trajectory, query, ...), never by execution order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A 64-bit seed for reproducible randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

/// SplitMix64, the finalizer used to mix seeds with stream indices.
///
/// This is the exact function from Steele, Lea & Flood's `SplittableRandom`;
/// it is stated here in full so that substream keys can be recomputed by any
/// other implementation.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a substream key from a base seed and an index path.
///
/// The key is `h_k` where `h_0 = splitmix64(seed)` and
/// `h_{i+1} = splitmix64(h_i ^ path[i])`.
pub fn substream(seed: Seed, path: &[u64]) -> u64 {
    let mut h = splitmix64(seed.0);
    for &p in path {
        h = splitmix64(h ^ p);
    }
    h
}

/// A ChaCha8 generator seeded from `substream(seed, path)`.
pub fn rng_for(seed: Seed, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream(seed, path))
}
