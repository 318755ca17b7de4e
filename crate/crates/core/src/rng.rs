//! Seeded random streams.
//!
//! Every run owns one [`RngStream`] backed by ChaCha8. ChaCha output is
//! specified bit-for-bit, so a seed reproduces the same sequence on every
//! platform and toolchain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform real in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform real in the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.uniform();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn uniform_range(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform index in `0..n`. Panics when `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// `+1.0` or `-1.0` with equal probability.
    pub fn sign(&mut self) -> f64 {
        if self.inner.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.uniform() < p
        }
    }

    /// `amount` distinct indices drawn uniformly from `0..len`, skipping
    /// `exclude` when given.
    pub fn sample_distinct(
        &mut self,
        len: usize,
        amount: usize,
        exclude: Option<usize>,
    ) -> Vec<usize> {
        match exclude {
            Some(skip) if skip < len => rand::seq::index::sample(&mut self.inner, len - 1, amount)
                .into_iter()
                .map(|i| if i >= skip { i + 1 } else { i })
                .collect(),
            _ => rand::seq::index::sample(&mut self.inner, len, amount).into_vec(),
        }
    }
}

/// Derives a 64-bit seed from a base seed, a textual key and a counter.
///
/// SHA-256 keeps the mapping stable across releases, unlike
/// `std::hash::DefaultHasher`.
pub fn derive_seed(base: u64, key: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(base.to_le_bytes());
    hasher.update((key.len() as u64).to_le_bytes());
    hasher.update(key.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
