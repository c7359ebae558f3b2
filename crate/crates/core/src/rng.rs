//! Counter-based seed splitting.
//!
//! Every random stream is a ChaCha20 generator keyed by a hash of
//! `(root seed, purpose label)` and positioned on stream `index`, so trial `i`
//! draws the same numbers regardless of which thread runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Root of a family of independent, reproducible streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    root: u64,
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeedStream {
    pub fn new(root: u64) -> Self {
        Self { root }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// Derived 64-bit seed for `(label, index)`; used to report per-trial seeds.
    pub fn derive(&self, label: &str, index: u64) -> u64 {
        let mut h = mix(self.root);
        for b in label.bytes() {
            h = mix(h ^ b as u64);
        }
        mix(h ^ index.rotate_left(17))
    }

    /// Generator for `(label, index)`.
    pub fn rng(&self, label: &str, index: u64) -> ChaCha20Rng {
        let mut key = mix(self.root);
        for b in label.bytes() {
            key = mix(key ^ b as u64);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(key);
        rng.set_stream(index);
        rng
    }
}
