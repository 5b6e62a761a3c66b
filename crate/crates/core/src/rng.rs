//! Seeded, splittable randomness.
//!
//! Every random decision in the pipeline draws from a ChaCha stream whose
//! seed is derived from the run seed plus a purpose key, so results do not
//! depend on evaluation order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// 64-bit FNV-1a over a byte string.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent generator for `(seed, purpose, key)`.
pub fn derive(seed: u64, purpose: &str, key: &str) -> Rng {
    let mixed = splitmix(seed ^ splitmix(fnv1a(purpose.as_bytes()) ^ splitmix(fnv1a(key.as_bytes()))));
    Rng::seed_from_u64(mixed)
}
