//! Seeded, stream-addressable random number generation.
//!
//! Every sampling routine in the crate takes a [`SeededStream`]: a
//! `(seed, stream_id)` pair mapped onto an independent ChaCha8 stream.
//! Identical pairs produce identical variate sequences on every
//! platform and regardless of thread count, which is what makes
//! parallel generation reproducible: each vertex and each Monte Carlo
//! task owns its own substream, so the work can be scheduled in any
//! order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Address of one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        SeededStream { seed, stream_id }
    }

    /// The same seed, a different substream.
    pub fn substream(self, stream_id: u64) -> Self {
        SeededStream { seed: self.seed, stream_id }
    }

    /// Instantiate the generator positioned at the start of the stream.
    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
