//! Replayable random streams addressed by a structured path.
//!
//! Every random decision in a simulation is drawn from a stream derived from
//! `(master_seed, path)`. The master seed fixes the ChaCha key and the path is
//! folded into the 64-bit ChaCha stream selector, so two tasks never share
//! a generator and results do not depend on the order tasks run in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator handed to every sampling routine.
pub type Stream = ChaCha8Rng;

/// Well-known first path components.
pub mod tags {
    pub const BATCH: u64 = 1;
    pub const POOL: u64 = 2;
    pub const PROJECT: u64 = 3;
    pub const SCRATCH: u64 = 0xff;
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Address of a random stream: a master seed plus a path such as
/// `[PROJECT, strategy, replication, request]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    master_seed: u64,
    path: Vec<u64>,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        SeedSpec { master_seed, path: Vec::new() }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Extends the path by one component.
    pub fn child(&self, component: u64) -> SeedSpec {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend_from_slice(&self.path);
        path.push(component);
        SeedSpec { master_seed: self.master_seed, path }
    }

    fn key(&self) -> [u8; 32] {
        let mut key = [0u8; 32];
        let mut state = self.master_seed;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        key
    }

    fn stream_selector(&self) -> u64 {
        // Length first so that [] and [0] differ.
        let mut h = mix64(self.path.len() as u64 ^ 0x5851_f42d_4c95_7f2d);
        for (i, &c) in self.path.iter().enumerate() {
            h = mix64(h ^ mix64(c.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1))));
        }
        h
    }

    /// Creates the generator for this address. Re-deriving yields the
    /// identical draw sequence.
    pub fn derive_stream(&self) -> Stream {
        let mut rng = ChaCha8Rng::from_seed(self.key());
        rng.set_stream(self.stream_selector());
        rng
    }
}

/// Free-function form of [`SeedSpec::derive_stream`].
pub fn derive_stream(spec: &SeedSpec) -> Stream {
    spec.derive_stream()
}
