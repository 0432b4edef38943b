//! Seed derivation. Every stochastic stage draws from its own ChaCha stream whose
//! seed is a hash of (root seed, role tag, index), so runs replay exactly and do not
//! depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type SimRng = ChaCha20Rng;

pub fn derive_seed(root: u64, role: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update((role.len() as u64).to_le_bytes());
    h.update(role.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    let mut b = [0u8; 8];
    b.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(b)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn derived_rng(root: u64, role: &str, index: u64) -> SimRng {
    rng_from_seed(derive_seed(root, role, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derivation_is_stable_and_separates_roles() {
        assert_eq!(derive_seed(7, "disorder", 0), derive_seed(7, "disorder", 0));
        assert_ne!(derive_seed(7, "disorder", 0), derive_seed(7, "disorder", 1));
        assert_ne!(derive_seed(7, "disorder", 0), derive_seed(7, "initial", 0));
        assert_ne!(derive_seed(7, "disorder", 0), derive_seed(8, "disorder", 0));
        // tag/index boundary must not alias
        assert_ne!(derive_seed(1, "a1", 0), derive_seed(1, "a", 10));
    }

    #[test]
    fn streams_replay() {
        let mut a = derived_rng(3, "x", 2);
        let mut b = derived_rng(3, "x", 2);
        for _ in 0..16 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }
}
