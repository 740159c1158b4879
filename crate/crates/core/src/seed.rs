//! Deterministic per-stage random sources.
//!
//! Every consumer of randomness gets its own generator, seeded from the master
//! seed and a stage label. Adding or removing a stage never shifts the stream
//! seen by another one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn stage_rng(master: u64, label: &str) -> Rng {
    Rng::seed_from_u64(derive_seed(master, label))
}
