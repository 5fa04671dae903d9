//! Seeded random streams.
//!
//! Every stochastic routine draws from ChaCha8 (`rand_chacha::ChaCha8Rng`), a
//! counter-based generator whose output is fixed by the seed and the stream
//! number. Normal variates come from `rand_distr::StandardNormal`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type FpRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> FpRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of `seed`, for fan-out across workers.
pub fn substream(seed: u64, stream: u64) -> FpRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}
