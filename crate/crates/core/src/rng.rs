//! Seeded randomness. Every random quantity in the library flows from a
//! ChaCha generator built here, so a fixed seed gives a reproducible run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
