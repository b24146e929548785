//! Seeded, splittable randomness.
//!
//! A handle is ChaCha20 (the `rand_chacha` implementation, 20 rounds) keyed
//! by four successive SplitMix64 outputs of the 64-bit seed, written
//! little-endian, with the 64-bit stream id selecting the ChaCha stream.
//! The byte sequence is therefore fixed for a given `(seed, stream)` on
//! every platform.

use num_bigint::BigUint;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use super::prime::PrimeField;

/// One step of SplitMix64.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes two words into a stream id.
pub fn mix(a: u64, b: u64) -> u64 {
    let mut s = a;
    let x = splitmix64(&mut s);
    let mut t = x ^ b.rotate_left(17);
    splitmix64(&mut t)
}

#[derive(Clone, Debug)]
pub struct RngHandle {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl RngHandle {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
        }
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(stream);
        RngHandle { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh handle on the same seed whose stream is derived from this
    /// handle's stream and `tag`. Does not advance `self`.
    pub fn child(&self, tag: u64) -> RngHandle {
        RngHandle::new(self.seed, mix(self.stream, tag))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, bound)` by masked rejection. `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        if bound == 1 {
            return 0;
        }
        let mask = u64::MAX >> (bound - 1).leading_zeros();
        loop {
            let v = self.next_u64() & mask;
            if v < bound {
                return v;
            }
        }
    }

    /// Uniform in `[0, bound)` for an arbitrary-precision bound.
    pub fn uniform_biguint(&mut self, bound: &BigUint) -> BigUint {
        assert!(bound.bits() > 0);
        let bits = (bound - 1u32).bits();
        if bits == 0 {
            return BigUint::default();
        }
        let words = bits.div_ceil(64) as usize;
        let top_mask = if bits % 64 == 0 {
            u64::MAX
        } else {
            (1u64 << (bits % 64)) - 1
        };
        loop {
            let mut limbs: Vec<u32> = Vec::with_capacity(2 * words);
            for i in 0..words {
                let mut w = self.next_u64();
                if i == words - 1 {
                    w &= top_mask;
                }
                limbs.push(w as u32);
                limbs.push((w >> 32) as u32);
            }
            let v = BigUint::new(limbs);
            if &v < bound {
                return v;
            }
        }
    }

    /// Uniform residue modulo the field's prime.
    pub fn uniform_residue<P: PrimeField>(&mut self, ctx: &P) -> P::Residue {
        match ctx.modulus_u64() {
            Some(p) => ctx.from_u64(self.below(p)),
            None => ctx.from_biguint(&self.uniform_biguint(ctx.modulus())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime::{Fp64, FpBig};

    #[test]
    fn golden_draws_mod_7() {
        let f = Fp64::new(7).unwrap();
        let mut r = RngHandle::new(0, 0);
        let draws: Vec<u64> = (0..3).map(|_| r.uniform_residue(&f)).collect();
        assert_eq!(draws, vec![GOLDEN_7[0], GOLDEN_7[1], GOLDEN_7[2]]);
    }

    // recorded once from this generator definition
    const GOLDEN_7: [u64; 3] = [6, 5, 5];

    #[test]
    fn binary_range() {
        let f = Fp64::new(2).unwrap();
        let mut r = RngHandle::new(99, 3);
        let mut seen = [false; 2];
        for _ in 0..100 {
            let v = r.uniform_residue(&f);
            assert!(v < 2);
            seen[v as usize] = true;
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn reproducible_and_stream_separated() {
        let mut a = RngHandle::new(12345, 7);
        let mut b = RngHandle::new(12345, 7);
        for _ in 0..10_000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = RngHandle::new(12345, 8);
        let mut d = RngHandle::new(12345, 7);
        assert!((0..64).any(|_| c.next_u64() != d.next_u64()));
    }

    #[test]
    fn backends_draw_identically() {
        let p = 1_000_003u64;
        let small = Fp64::new(p).unwrap();
        let big = FpBig::new(BigUint::from(p)).unwrap();
        let mut a = RngHandle::new(5, 5);
        let mut b = RngHandle::new(5, 5);
        for _ in 0..1000 {
            let x = a.uniform_residue(&small);
            let y = b.uniform_residue(&big);
            assert_eq!(BigUint::from(x), y);
        }
    }

    #[test]
    fn splitmix_reference_outputs() {
        let mut s = 0u64;
        assert_eq!(splitmix64(&mut s), 0xe220_a839_7b1d_cdaf);
        assert_eq!(splitmix64(&mut s), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn first_word_is_stable() {
        // pins the key expansion and stream selection
        let mut r = RngHandle::new(1, 0);
        assert_eq!(r.next_u64(), GOLDEN_SEED1);
    }

    const GOLDEN_SEED1: u64 = 2920944695010215200;

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn equal_handles_agree_and_streams_separate(seed in any::<u64>(), stream in any::<u64>()) {
            let mut a = RngHandle::new(seed, stream);
            let mut b = RngHandle::new(seed, stream);
            for _ in 0..1000 {
                prop_assert_eq!(a.next_u64(), b.next_u64());
            }
            let mut c = RngHandle::new(seed, stream.wrapping_add(1));
            let mut d = RngHandle::new(seed, stream);
            prop_assert!((0..64).any(|_| c.next_u64() != d.next_u64()));
        }

        #[test]
        fn below_stays_in_range(seed in any::<u64>(), bound in 1u64..) {
            let mut r = RngHandle::new(seed, 0);
            for _ in 0..50 {
                prop_assert!(r.below(bound) < bound);
            }
        }
    }
}
