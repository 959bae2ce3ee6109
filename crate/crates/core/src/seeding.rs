//! Deterministic random substreams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded from a
//! [`Substream`]. A substream is identified by the global 64-bit seed plus a
//! path of integers (a domain tag followed by indices such as sample, shot and
//! qubit). The path is folded into a single 64-bit key with the SplitMix64
//! finalizer and the key is passed to `ChaCha8Rng::seed_from_u64`.
//!
//! Because each cell of work owns its own stream, results do not depend on
//! the order in which cells are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags for the top-level path component.
pub mod domain {
    pub const GENERATE: u64 = 1;
    pub const SPLIT: u64 = 2;
    pub const INIT: u64 = 3;
    pub const PERTURB: u64 = 4;
    pub const LOSS: u64 = 5;
    pub const EVAL: u64 = 6;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Substream {
    key: u64,
}

impl Substream {
    pub fn root(seed: u64) -> Self {
        Self {
            key: splitmix64(seed),
        }
    }

    /// Descend one level along the path.
    pub fn child(self, index: u64) -> Self {
        Self {
            key: splitmix64(self.key ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D))),
        }
    }

    pub fn path(self, indices: &[u64]) -> Self {
        indices.iter().fold(self, |s, &i| s.child(i))
    }

    pub fn key(self) -> u64 {
        self.key
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}
