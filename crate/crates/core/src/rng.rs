//! Deterministic random streams.
//!
//! Every replication and every random instance owns its own ChaCha stream,
//! addressed by `(seed, stream)`; nothing is shared between games, so results
//! do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GameRng = ChaCha8Rng;

/// Stream `stream` of the generator keyed by `seed`.
pub fn stream(seed: u64, stream: u64) -> GameRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The stream used for replication `rep` of an experiment seeded with `seed`.
pub fn rep_stream(seed: u64, rep: u64) -> GameRng {
    stream(seed, rep)
}

/// Uniform sample in the open interval (0, 1).
pub(crate) fn open01<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}
