//! Counter-based randomness.
//!
//! A [`KeyedStream`] addresses the ChaCha8 keystream by `(seed, stream, slot)`,
//! so a box's draws depend only on its identity and never on the order in
//! which boxes, rounds or threads happen to consume them.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 32-bit keystream words reserved for each slot.
const WORDS_PER_SLOT: u128 = 16;

#[derive(Clone, Debug)]
pub struct KeyedStream {
    base: ChaCha8Rng,
}

impl KeyedStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut base = ChaCha8Rng::seed_from_u64(seed);
        base.set_stream(stream);
        Self { base }
    }

    /// Generator positioned at the start of `slot`. Each slot owns
    /// [`WORDS_PER_SLOT`] words (eight `u64` draws) before running into the next.
    pub fn at(&self, slot: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_word_pos(slot as u128 * WORDS_PER_SLOT);
        rng
    }

    /// Two independent uniforms in `[0, 1)` for `slot`.
    pub fn uniforms(&self, slot: u64) -> [f64; 2] {
        let mut rng = self.at(slot);
        [unit_f64(rng.next_u64()), unit_f64(rng.next_u64())]
    }
}

/// Maps 64 random bits to `[0, 1)` using the top 53.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed for the `index`-th sub-experiment of a run keyed by `seed`. Drawn
/// from a stream no trial ever uses.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    KeyedStream::new(seed, u64::MAX).at(index).next_u64()
}

/// Per-trial keys: boxes and game inputs live on separate streams.
pub(crate) fn trial_streams(seed: u64, trial: u64) -> (KeyedStream, KeyedStream) {
    (KeyedStream::new(seed, trial << 1), KeyedStream::new(seed, (trial << 1) | 1))
}
