//! Splittable seed derivation.
//!
//! Every random stream in the crate is a [`ChaCha8Rng`] seeded from a `u64`.
//! Child seeds are derived by mixing a parent seed with a sequence of keys,
//! so independent jobs (folds, methods, trees) never share a stream and adding
//! a new job never perturbs an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A key that can be folded into a derived seed.
pub trait SeedKey {
    fn key(&self) -> u64;
}

impl SeedKey for u64 {
    fn key(&self) -> u64 {
        *self
    }
}

impl SeedKey for usize {
    fn key(&self) -> u64 {
        *self as u64
    }
}

impl SeedKey for str {
    fn key(&self) -> u64 {
        // FNV-1a
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

impl SeedKey for &str {
    fn key(&self) -> u64 {
        (**self).key()
    }
}

impl SeedKey for String {
    fn key(&self) -> u64 {
        self.as_str().key()
    }
}

/// Derive a child seed from `parent` and one key.
pub fn derive<K: SeedKey + ?Sized>(parent: u64, key: &K) -> u64 {
    mix(mix(parent) ^ key.key().rotate_left(17))
}
