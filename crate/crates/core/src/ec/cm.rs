//! Hensel lifting of the Frobenius eigenvalues modulo powers of `ℓ`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::primality::valuation;
use crate::error::{Error, Result};

/// Eigenvalue data for `X^2 - tX + q` modulo `ℓ^(e+δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmData {
    pub t: i64,
    pub ell: u64,
    pub e: u32,
    pub delta: u32,
    pub lambda: BigUint,
    pub mu: BigUint,
    pub modulus: BigUint,
}

fn reduce(a: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    a.mod_floor(&m).to_biguint().expect("nonnegative")
}

/// Roots `λ ≡ 1`, `μ ≡ q (mod ℓ)` of `X^2 - tX + q` modulo `ℓ^m`, lifted
/// one `ℓ`-adic digit at a time.
pub fn cm_hensel(q: u64, t: i64, ell: u64, m: u32) -> Result<(BigUint, BigUint)> {
    if m == 0 {
        return Err(Error::PreconditionViolated(
            "precision must be positive".into(),
        ));
    }
    let l = BigInt::from(ell);
    let qi = BigInt::from(q);
    let ti = BigInt::from(t);
    if (&qi % &l).is_zero() || ((&qi - 1i32) % &l).is_zero() || !((&qi + 1i32 - &ti) % &l).is_zero()
    {
        return Err(Error::PreconditionViolated(
            "need ℓ ∤ q(q-1) and ℓ | q + 1 - t".into(),
        ));
    }
    let poly = |x: &BigInt| x * x - &ti * x + &qi;
    let lu = BigUint::from(ell);
    // P'(λ) ≡ 2 - t ≡ 1 - q (mod ℓ), a unit
    let dinv = {
        let d = reduce(&(BigInt::from(2) - &ti), &lu);
        d.modpow(&(&lu - 2u32), &lu)
    };
    let mut lambda = BigInt::one();
    let mut pk = BigInt::from(ell);
    for _ in 1..m {
        let val = poly(&lambda);
        debug_assert!((&val % &pk).is_zero());
        let digit = reduce(&(-(val / &pk) * BigInt::from(dinv.clone())), &lu);
        lambda += BigInt::from(digit) * &pk;
        pk *= &l;
    }
    let modulus = lu.pow(m);
    let lam = reduce(&lambda, &modulus);
    let mu = reduce(&(&ti - BigInt::from(lam.clone())), &modulus);
    Ok((lam, mu))
}

impl CmData {
    /// Data at precision `e + δ` for a curve of order `n = q + 1 - t`.
    pub fn new(q: u64, n: u64, ell: u64, delta: u32) -> Result<Self> {
        let t = (q as i128 + 1 - n as i128) as i64;
        let e = valuation(n, ell);
        if e == 0 {
            return Err(Error::PreconditionViolated(format!(
                "{ell} does not divide the group order"
            )));
        }
        let (lambda, mu) = cm_hensel(q, t, ell, e + delta)?;
        let modulus = BigUint::from(ell).pow(e + delta);
        let data = CmData {
            t,
            ell,
            e,
            delta,
            lambda,
            mu,
            modulus,
        };
        if data.lambda_order() != BigUint::from(ell).pow(delta) {
            return Err(Error::Internal("eigenvalue has the wrong order".into()));
        }
        Ok(data)
    }

    /// Multiplicative order of `λ` modulo `ℓ^(e+δ)`, assumed a power of `ℓ`.
    pub fn lambda_order(&self) -> BigUint {
        let l = BigUint::from(self.ell);
        let mut ord = BigUint::one();
        let mut pw = self.lambda.clone();
        while !pw.is_one() {
            pw = pw.modpow(&l, &self.modulus);
            ord *= &l;
            if ord > self.modulus {
                return BigUint::zero();
            }
        }
        ord
    }

    /// `λ^s mod ℓ^(e+δ)`.
    pub fn lambda_pow(&self, s: u64) -> BigUint {
        self.lambda.modpow(&BigUint::from(s), &self.modulus)
    }
}
