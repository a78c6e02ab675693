//! Seeded, portable random streams.
//!
//! Every stochastic stage draws from its own ChaCha20 stream derived from the
//! run seed and a stage name, so adding draws to one stage never shifts the
//! numbers another stage sees.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Generator for the named substream `name` of run seed `seed`.
pub fn substream(seed: u64, name: &str) -> Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(name.as_bytes()));
    rng
}

/// Generator for substream `name` with an additional integer index, for
/// per-seed-set or per-sample streams.
pub fn indexed_substream(seed: u64, name: &str, index: u64) -> Rng {
    let mut key = name.as_bytes().to_vec();
    key.push(b'#');
    key.extend_from_slice(&index.to_le_bytes());
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(&key));
    rng
}

/// Generator keyed by arbitrary bytes, e.g. the text of a sentence.
pub fn keyed_substream(seed: u64, name: &str, key: &[u8]) -> Rng {
    indexed_substream(seed, name, fnv1a(key))
}
