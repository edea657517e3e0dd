//! Seeded randomness for reproducible initialization and shuffling.

use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic RNG; every randomized routine in the crate takes one of
/// these (or a seed) so that reruns are bit-identical.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform draw from (0, 1]. The open lower end keeps multiplicative
    /// updates away from absorbing zeros.
    pub fn uniform_open01(&mut self) -> f64 {
        (((self.0.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from [-1, 1).
    pub fn uniform_signed(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64) * (2.0 / (1u64 << 53) as f64) - 1.0
    }

    /// Unbiased-enough index draw in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    pub fn vec_open01(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform_open01()).collect()
    }
}
