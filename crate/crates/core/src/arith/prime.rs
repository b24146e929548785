//! Prime field contexts.
//!
//! Two backends implement [`PrimeField`]: [`Fp64`] keeps residues in a
//! machine word and is used whenever `p < 2^62`; [`FpBig`] works for any
//! prime. Both produce identical residues for the same inputs, which the
//! test suite checks by running the same computations through each.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::is_probable_prime;
use crate::error::{Error, Result};

/// Arithmetic in `Z/pZ` for a fixed prime `p`.
///
/// `Residue::default()` must be the zero residue.
pub trait PrimeField: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Residue: Clone + PartialEq + Eq + Hash + Debug + Default + Send + Sync;
    /// Accumulator for lazily reduced dot products.
    type Acc: Clone;

    fn modulus(&self) -> &BigUint;
    /// Bit length of `p`.
    fn bits(&self) -> u64;
    /// `p` as a machine word when it fits.
    fn modulus_u64(&self) -> Option<u64>;

    fn one(&self) -> Self::Residue;
    fn from_u64(&self, v: u64) -> Self::Residue;
    fn from_i64(&self, v: i64) -> Self::Residue {
        if v >= 0 {
            self.from_u64(v as u64)
        } else {
            self.neg(&self.from_u64(v.unsigned_abs()))
        }
    }
    fn from_biguint(&self, v: &BigUint) -> Self::Residue;
    fn to_biguint(&self, a: &Self::Residue) -> BigUint;
    fn to_u64(&self, a: &Self::Residue) -> Option<u64> {
        self.to_biguint(a).to_u64()
    }

    fn is_zero(&self, a: &Self::Residue) -> bool;
    fn add(&self, a: &Self::Residue, b: &Self::Residue) -> Self::Residue;
    fn sub(&self, a: &Self::Residue, b: &Self::Residue) -> Self::Residue;
    fn neg(&self, a: &Self::Residue) -> Self::Residue;
    fn mul(&self, a: &Self::Residue, b: &Self::Residue) -> Self::Residue;
    fn inv(&self, a: &Self::Residue) -> Result<Self::Residue>;

    fn acc_zero(&self) -> Self::Acc;
    fn acc_mul_add(&self, acc: &mut Self::Acc, a: &Self::Residue, b: &Self::Residue);
    fn acc_add(&self, acc: &mut Self::Acc, a: &Self::Residue);
    fn acc_reduce(&self, acc: &Self::Acc) -> Self::Residue;

    fn pow(&self, a: &Self::Residue, e: &BigUint) -> Self::Residue {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }
}

/// Word-sized prime field, `p < 2^62`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp64 {
    p: u64,
    big: BigUint,
    /// floor((2^64 - 1) / p), used for Barrett reduction when `p < 2^32`.
    barrett: u64,
    small: bool,
}

impl Fp64 {
    pub const LIMIT_BITS: u64 = 62;

    pub fn new(p: u64) -> Result<Self> {
        let big = BigUint::from(p);
        if p < 2 || !is_probable_prime(&big) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if p >= 1 << Self::LIMIT_BITS {
            return Err(Error::InvalidInput(format!(
                "{p} exceeds the word-sized backend; use FpBig"
            )));
        }
        Ok(Fp64 {
            p,
            big,
            barrett: u64::MAX / p,
            small: p < 1 << 32,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce_word(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        if self.small {
            self.reduce_word(a * b)
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.mulmod(a, b)
    }
}

impl PrimeField for Fp64 {
    type Residue = u64;
    type Acc = u128;

    fn modulus(&self) -> &BigUint {
        &self.big
    }
    fn bits(&self) -> u64 {
        64 - self.p.leading_zeros() as u64
    }
    fn modulus_u64(&self) -> Option<u64> {
        Some(self.p)
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    fn from_biguint(&self, v: &BigUint) -> u64 {
        (v % &self.big)
            .to_u64()
            .expect("reduced residue fits a word")
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
    fn to_u64(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::ZeroInverse);
        }
        // extended Euclid on signed 128-bit values
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
    #[inline]
    fn acc_zero(&self) -> u128 {
        0
    }
    #[inline]
    fn acc_mul_add(&self, acc: &mut u128, a: &u64, b: &u64) {
        if self.small {
            *acc += (a * b) as u128;
        } else {
            *acc += (*a as u128 * *b as u128) % self.p as u128;
        }
    }
    #[inline]
    fn acc_add(&self, acc: &mut u128, a: &u64) {
        *acc += *a as u128;
    }
    #[inline]
    fn acc_reduce(&self, acc: &u128) -> u64 {
        if *acc <= u64::MAX as u128 && self.small {
            self.reduce_word(*acc as u64)
        } else {
            (*acc % self.p as u128) as u64
        }
    }
    fn pow(&self, a: &u64, e: &BigUint) -> u64 {
        let mut result = 1u64;
        for i in (0..e.bits()).rev() {
            result = self.mulmod(result, result);
            if e.bit(i) {
                result = self.mulmod(result, *a);
            }
        }
        result
    }
}

/// Arbitrary-precision prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpBig {
    p: BigUint,
}

impl FpBig {
    pub fn new(p: BigUint) -> Result<Self> {
        if p < BigUint::from(2u32) || !is_probable_prime(&p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(FpBig { p })
    }
}

impl PrimeField for FpBig {
    type Residue = BigUint;
    type Acc = BigUint;

    fn modulus(&self) -> &BigUint {
        &self.p
    }
    fn bits(&self) -> u64 {
        self.p.bits()
    }
    fn modulus_u64(&self) -> Option<u64> {
        self.p.to_u64()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn from_u64(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.p
    }
    fn from_biguint(&self, v: &BigUint) -> BigUint {
        v % &self.p
    }
    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.p - b
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }
    fn inv(&self, a: &BigUint) -> Result<BigUint> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // p is prime, so a^(p-2) is the inverse
        let e = &self.p - BigUint::from(2u32);
        Ok(a.modpow(&e, &self.p))
    }
    fn acc_zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn acc_mul_add(&self, acc: &mut BigUint, a: &BigUint, b: &BigUint) {
        *acc += a * b;
    }
    fn acc_add(&self, acc: &mut BigUint, a: &BigUint) {
        *acc += a;
    }
    fn acc_reduce(&self, acc: &BigUint) -> BigUint {
        acc % &self.p
    }
    fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let f7 = Fp64::new(7).unwrap();
        assert_eq!(f7.inv(&3).unwrap(), 5);
        let f5 = Fp64::new(5).unwrap();
        assert_eq!(f5.inv(&1).unwrap(), 1);
        let f2 = Fp64::new(2).unwrap();
        assert_eq!(f2.inv(&1).unwrap(), 1);
        assert_eq!(f2.inv(&0), Err(Error::ZeroInverse));
    }

    #[test]
    fn rejects_composites() {
        assert!(Fp64::new(1).is_err());
        assert!(Fp64::new(9).is_err());
        assert!(Fp64::new(561).is_err());
        assert!(FpBig::new(BigUint::from(91u32)).is_err());
    }

    #[test]
    fn backends_agree_on_large_word_prime() {
        // 2^61 - 1 exercises the u128 path of the word backend
        let p = (1u64 << 61) - 1;
        let small = Fp64::new(p).unwrap();
        let big = FpBig::new(BigUint::from(p)).unwrap();
        let a = 0x1234_5678_9abc_def0 % p;
        let b = 0x0fed_cba9_8765_4321 % p;
        let ab = small.mul(&a, &b);
        assert_eq!(
            BigUint::from(ab),
            big.mul(&BigUint::from(a), &BigUint::from(b))
        );
        let ia = small.inv(&a).unwrap();
        assert_eq!(BigUint::from(ia), big.inv(&BigUint::from(a)).unwrap());
        let mut acc = small.acc_zero();
        let mut bacc = big.acc_zero();
        for _ in 0..100 {
            small.acc_mul_add(&mut acc, &a, &b);
            big.acc_mul_add(&mut bacc, &BigUint::from(a), &BigUint::from(b));
        }
        assert_eq!(BigUint::from(small.acc_reduce(&acc)), big.acc_reduce(&bacc));
    }

    #[test]
    fn barrett_reduction_is_exact() {
        for p in [2u64, 3, 5, 7, 13, 65521, 4294967291] {
            let f = Fp64::new(p).unwrap();
            for x in [0u64, 1, p - 1, p, p + 1, u64::MAX, u64::MAX - 1, 1 << 63] {
                assert_eq!(f.reduce_word(x), x % p, "p={p} x={x}");
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn inverse_is_an_involution(p in prop::sample::select(vec![2u64, 3, 7, 65537, (1 << 31) - 1, (1 << 61) - 1]),
                                    a in any::<u64>()) {
            let f = Fp64::new(p).unwrap();
            let a = a % p;
            prop_assume!(a != 0);
            let ia = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &ia), 1);
            prop_assert_eq!(f.inv(&ia).unwrap(), a);
        }

        #[test]
        fn word_and_big_backends_agree(a in any::<u64>(), b in any::<u64>(), e in any::<u32>()) {
            let p = (1u64 << 61) - 1;
            let small = Fp64::new(p).unwrap();
            let big = FpBig::new(BigUint::from(p)).unwrap();
            let (a, b) = (a % p, b % p);
            let (ba, bb) = (BigUint::from(a), BigUint::from(b));
            prop_assert_eq!(BigUint::from(small.mul(&a, &b)), big.mul(&ba, &bb));
            prop_assert_eq!(BigUint::from(small.sub(&a, &b)), big.sub(&ba, &bb));
            let e = BigUint::from(e);
            prop_assert_eq!(BigUint::from(small.pow(&a, &e)), big.pow(&ba, &e));
        }
    }
}
