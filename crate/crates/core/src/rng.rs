//! Seeded randomness.
//!
//! Every attempt runs on a xoshiro256++ generator seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Restart seeds are derived with
//! [`attempt_seed`], one SplitMix64 step over `seed ^ (attempt * 0x9E3779B97F4A7C15)`.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

pub type SolverRng = Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for attempt `attempt` of a run seeded with `seed`.
pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    SplitMix64::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(GOLDEN_GAMMA)).next_u64()
}

pub fn solver_rng(seed: u64) -> SolverRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}
