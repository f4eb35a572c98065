//! Deterministic random-number plumbing.
//!
//! All randomness in the crate flows through [`RngKey`], a small value that
//! names a position in a tree of independent ChaCha8 streams. A key is
//! derived from an explicit `u64` seed; children are derived with integer
//! tags. Because ChaCha8 is a counter-based generator and the derivation is
//! pure integer mixing, every draw is bit-identical across runs, platforms,
//! and worker counts — parallel code assigns each unit of work its own child
//! key instead of sharing a stream.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use alloc::vec::Vec;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A point in the deterministic stream tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngKey(u64);

impl RngKey {
    /// Root key for an explicit seed.
    pub fn new(seed: u64) -> Self {
        RngKey(mix(seed ^ GOLDEN))
    }

    /// Derive an independent child stream for `tag`.
    #[must_use]
    pub fn child(self, tag: u64) -> Self {
        RngKey(mix(self.0 ^ GOLDEN.wrapping_mul(tag.wrapping_add(1))))
    }

    /// Instantiate the ChaCha8 generator at this key.
    pub fn rng(self) -> ChaCha8Rng {
        let mut state = self.0;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix(state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

/// `count` standard-normal draws from `rng`.
pub fn normal_vec(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| StandardNormal.sample(rng)).collect()
}

/// Uniform index in `0..n`.
#[inline]
pub fn uniform_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Uniform draw on `[0, 1)`.
#[inline]
pub fn uniform_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random()
}

/// Fisher-Yates shuffle of `0..n`, driven by its own child stream.
pub fn shuffled_indices(key: RngKey, n: usize) -> Vec<usize> {
    let mut rng = key.rng();
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_stream() {
        let a: Vec<f64> = normal_vec(&mut RngKey::new(7).child(3).rng(), 16);
        let b: Vec<f64> = normal_vec(&mut RngKey::new(7).child(3).rng(), 16);
        assert_eq!(a, b);
    }

    #[test]
    fn sibling_keys_differ() {
        let a = normal_vec(&mut RngKey::new(7).child(0).rng(), 8);
        let b = normal_vec(&mut RngKey::new(7).child(1).rng(), 8);
        assert_ne!(a, b);
    }

    #[test]
    fn child_order_matters() {
        let a = RngKey::new(1).child(2).child(3);
        let b = RngKey::new(1).child(3).child(2);
        assert_ne!(a, b);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let idx = shuffled_indices(RngKey::new(11), 100);
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }
}
