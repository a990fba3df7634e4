//! Seeded randomness with a documented split function.
//!
//! Every randomized routine takes a 64-bit seed. Independent trials derive
//! their own seeds with [`split_seed`], so running trials in any order or
//! concurrently never changes the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` under parent `seed`: `mix64(seed ^ mix64(index))`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
