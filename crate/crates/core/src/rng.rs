//! Seed derivation and the named generator used everywhere randomness is
//! needed. Sub-seeds derive from (master seed, stream, index) so parallel
//! runs reproduce serial ones exactly.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 finalizer; a fixed, platform-independent mixing step.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a sub-seed from a master seed, a stream tag and an index.
/// Distinct (stream, index) pairs give independent-looking streams.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index)
}

/// The module RNG: ChaCha12 seeded deterministically.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derivation_is_deterministic_and_sensitive() {
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 2, 4));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 3, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
    }

    #[test]
    fn generator_streams_reproduce() {
        let a: Vec<u64> = (0..8).map(|_| 0).scan(rng_from_seed(7), |r, _| Some(r.gen())).collect();
        let b: Vec<u64> = (0..8).map(|_| 0).scan(rng_from_seed(7), |r, _| Some(r.gen())).collect();
        assert_eq!(a, b);
    }
}
