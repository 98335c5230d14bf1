//! Counter-based random streams.
//!
//! Every replication of every simulation draws from its own ChaCha8 stream,
//! addressed by `(master seed, group, replication)`. The key is the master
//! seed and the 64-bit ChaCha stream id packs the group and replication
//! indices, so streams never overlap and the values a replication sees do
//! not depend on which worker thread runs it.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Largest group / replication index addressable by [`RandomStream::derive`].
pub const MAX_INDEX: u64 = u32::MAX as u64;

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// A single stream keyed by `seed` (stream id 0).
    pub fn from_seed(seed: u64) -> Self {
        Self::derive(seed, 0, 0)
    }

    /// The stream for replication `replication` of simulation group `group`.
    ///
    /// # Panics
    ///
    /// If either index exceeds [`MAX_INDEX`].
    pub fn derive(master_seed: u64, group: u64, replication: u64) -> Self {
        assert!(group <= MAX_INDEX, "group index {group} out of range");
        assert!(replication <= MAX_INDEX, "replication index {replication} out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream((group << 32) | replication);
        Self { rng }
    }

    /// A uniform variate on the open interval (0, 1) with 53 random bits.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
