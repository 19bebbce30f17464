//! Seeding rules.
//!
//! Every run owns exactly one ChaCha8 stream, keyed by its 64-bit seed through
//! `ChaCha8Rng::seed_from_u64`. Batch runs derive their seeds from the batch
//! base seed with [`deterministic_mix`], so any single run can be replayed on
//! its own from the seed recorded in the report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::difficulty::DifficultyGoal;

pub type RunRng = ChaCha8Rng;

pub fn run_rng(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 output function (Steele, Lea & Flood). A bijection on `u64`.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run_index` for `goal` within a batch.
///
/// Chains SplitMix64 over `base_seed`, the goal's IEEE-754 bits and the run
/// index. Each step is a bijection of the previous state xor the next word,
/// so for a fixed prefix distinct last words always give distinct seeds.
pub fn deterministic_mix(base_seed: u64, goal: DifficultyGoal, run_index: u64) -> u64 {
    let state = splitmix64(base_seed);
    let state = splitmix64(state ^ goal.value().to_bits());
    splitmix64(state ^ run_index)
}
