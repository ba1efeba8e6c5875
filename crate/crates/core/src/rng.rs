//! Seeding conventions.
//!
//! Every random draw in the crate comes from [`ChaCha8Rng`]. A run is fully
//! determined by one `u64` seed; independent sub-streams (per chunk, per
//! replicate, per individual) use the ChaCha stream counter, so results do
//! not depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `seed`, stream 0.
pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for `seed` on an independent stream.
pub fn rng_stream(seed: u64, stream: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
