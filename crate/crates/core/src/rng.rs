//! Deterministic randomness plumbing.
//!
//! Every stochastic component (randomized orderings, graph generators,
//! fleets) flows from a single 64-bit seed through `ChaCha8Rng`, so
//! identical seeds give bit-identical runs. Independent sub-streams are
//! derived with a splitmix-style mix, which keeps parallel and serial
//! execution byte-identical.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed for the deterministic generator (`ChaCha8Rng`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

/// The one generator used throughout the crate.
pub fn rng_from_seed(seed: RngSeed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.0)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a master seed and two coordinates.
pub fn derive_seed(seed: RngSeed, a: u64, b: u64) -> RngSeed {
    RngSeed(splitmix64(splitmix64(splitmix64(seed.0) ^ a) ^ b))
}

/// A uniformly random permutation of `[0, n)` via Fisher-Yates.
pub fn fisher_yates_permutation(n: usize, seed: RngSeed) -> Vec<usize> {
    assert!(n >= 1, "permutation over an empty set");
    let mut rng = rng_from_seed(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
