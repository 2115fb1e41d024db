//! Replayable randomness.
//!
//! A tape is a 64-bit seed. Each consumer asks for a stream by label and
//! gets its own ChaCha20 generator keyed by `SHA-256(seed || label)`, so
//! adding draws in one place never shifts another consumer's values.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tape {
    pub seed: u64,
}

impl Default for Tape {
    fn default() -> Self {
        Self { seed: 0x5a45_524f_5457_4f00 }
    }
}

impl Tape {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn stream(&self, label: &str) -> ChaCha20Rng {
        let mut h = Sha256::new();
        h.update(self.seed.to_be_bytes());
        h.update(label.as_bytes());
        ChaCha20Rng::from_seed(h.finalize().into())
    }

    /// Reads `{"seed": N}`.
    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string(self).expect("tape serializes") + "\n")
    }
}
