//! Counter-based uniform streams.
//!
//! A stream is addressed by `(seed, stream_id)`; the `i`-th uniform of a stream
//! is a pure function of `(seed, stream_id, i)`, so blocks of a stream can be
//! generated on any worker in any order and still produce identical values.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// One ChaCha block position holds two 32-bit words per `u64` draw.
const WORDS_PER_DRAW: u128 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformStream {
    seed: u64,
    stream_id: u64,
}

impl UniformStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    fn rng_at(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos(index as u128 * WORDS_PER_DRAW);
        rng
    }

    /// Uniform number at position `index`, strictly inside `(0, 1)`.
    pub fn at(&self, index: u64) -> f64 {
        to_open_unit(self.rng_at(index).next_u64())
    }

    /// Fills `out` with positions `start, start + 1, ...`.
    pub fn fill(&self, start: u64, out: &mut [f64]) {
        let mut rng = self.rng_at(start);
        for slot in out {
            *slot = to_open_unit(rng.next_u64());
        }
    }
}

/// Maps the top 52 bits onto the midpoints of a 2^-52 grid: never 0, never 1.
fn to_open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_access_matches_sequential_fill() {
        let s = UniformStream::new(42, 3);
        let mut buf = vec![0.0; 100];
        s.fill(0, &mut buf);
        for (i, &u) in buf.iter().enumerate() {
            assert_eq!(u, s.at(i as u64));
        }
        let mut tail = vec![0.0; 10];
        s.fill(90, &mut tail);
        assert_eq!(&tail[..], &buf[90..]);
    }

    #[test]
    fn streams_and_seeds_differ() {
        let a = UniformStream::new(1, 0).at(0);
        assert_ne!(a, UniformStream::new(1, 1).at(0));
        assert_ne!(a, UniformStream::new(2, 0).at(0));
    }

    #[test]
    fn values_stay_inside_open_interval() {
        assert!(to_open_unit(0) > 0.0);
        assert!(to_open_unit(u64::MAX) < 1.0);
        let s = UniformStream::new(7, 0);
        let mut buf = vec![0.0; 10_000];
        s.fill(0, &mut buf);
        let mean = buf.iter().sum::<f64>() / buf.len() as f64;
        assert!((mean - 0.5).abs() < 0.01);
    }
}
