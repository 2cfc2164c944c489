//! Seed derivation.
//!
//! Every consumer of randomness draws from a ChaCha8 stream selected by
//! `(root seed, purpose)`. Streams are independent counters over the same
//! key, so adding a new consumer never shifts the draws of an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purposes that own a random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Folds,
    SynthMeans,
    SynthNoise,
}

impl Purpose {
    fn stream(self) -> u64 {
        match self {
            Purpose::Folds => 1,
            Purpose::SynthMeans => 2,
            Purpose::SynthNoise => 3,
        }
    }
}

pub fn stream(seed: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose.stream());
    rng
}
