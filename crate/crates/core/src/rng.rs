//! Seeded random number generation.
//!
//! Everything stochastic in the crate draws from ChaCha8, which is counter based and
//! portable, so a seed reproduces the same stream on every platform. Independent
//! trials use distinct streams of the same seed rather than re-seeding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `stream` under `seed`; streams never overlap.
pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
