//! Deterministic RNG streams: (seed, stream_index) fully determines the
//! sequence, and distinct stream indices are independent. Paths, ensemble
//! members, and checks each own a stream so parallel evaluation cannot
//! reorder draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Substream for a child task; offsets are stable across versions.
    pub fn substream(&self, offset: u64) -> Self {
        Self { seed: self.seed, stream_index: self.stream_index.wrapping_add(offset) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}
