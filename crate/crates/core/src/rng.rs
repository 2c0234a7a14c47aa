//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 keystream. The 256-bit key is derived from the
//! 64-bit user seed with `rand_core`'s `seed_from_u64` (a fixed PCG32
//! expansion) and the 64-bit ChaCha stream id selects the substream, so
//! `(seed, index)` pins the sequence on every platform. Uniform doubles take
//! the top 53 bits of one `u64` output.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    seed: u64,
    index: u64,
}

impl RandomStream {
    /// Substream 0 of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::with_index(seed, 0)
    }

    pub fn with_index(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream { rng, seed, index }
    }

    /// A fresh, independent stream for worker or replicate `index`. The
    /// result does not depend on how much of `self` has been consumed.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_index(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// `true` with probability `q`; exact for `q = 0` and `q = 1`.
    #[inline]
    pub fn bernoulli(&mut self, q: f64) -> bool {
        self.uniform() < q
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
