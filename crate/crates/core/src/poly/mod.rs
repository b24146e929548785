//! Univariate polynomials over a field context.

pub mod compositum;
pub mod dense;
pub mod modular;
pub mod rational;

use std::fmt;

use num_bigint::BigUint;

use crate::arith::{PrimeField, RngHandle};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

pub use compositum::{composed_product, composed_sum};
pub use modular::{
    charpoly_mod, frobenius_power, minpoly_bm, minpoly_mod, minpoly_over, modcomp, powmod, Modulus,
};
pub use rational::RationalFraction;

/// Coefficients low to high, stored flat; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<P: PrimeField> {
    field: Field<P>,
    data: Vec<P::Residue>,
}

impl<P: PrimeField> fmt::Debug for Poly<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.field.degree();
        let p = self.field.p();
        let coeffs: Vec<String> = self
            .data
            .chunks(s)
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|r| p.to_biguint(r).to_string()).collect();
                parts.join(",")
            })
            .collect();
        write!(f, "Poly[{}]", coeffs.join(";"))
    }
}

impl<P: PrimeField> Poly<P> {
    pub fn from_flat(field: &Field<P>, data: Vec<P::Residue>) -> Self {
        debug_assert_eq!(data.len() % field.degree(), 0);
        let data = dense::trimmed(field, data);
        Poly {
            field: field.clone(),
            data,
        }
    }

    pub fn from_coeffs(field: &Field<P>, coeffs: &[Fe<P>]) -> Self {
        let data = coeffs.iter().flat_map(|c| c.iter().cloned()).collect();
        Self::from_flat(field, data)
    }

    /// Coefficients taken from the prime field.
    pub fn from_i64s(field: &Field<P>, coeffs: &[i64]) -> Self {
        let cs: Vec<Fe<P>> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Self::from_coeffs(field, &cs)
    }

    pub fn zero(field: &Field<P>) -> Self {
        Poly {
            field: field.clone(),
            data: Vec::new(),
        }
    }

    pub fn one(field: &Field<P>) -> Self {
        Self::constant(field, &field.one())
    }

    pub fn x(field: &Field<P>) -> Self {
        Self::monomial(field, 1)
    }

    pub fn constant(field: &Field<P>, c: &[P::Residue]) -> Self {
        Self::from_flat(field, c.to_vec())
    }

    pub fn monomial(field: &Field<P>, k: usize) -> Self {
        let mut data = vec![P::Residue::default(); (k + 1) * field.degree()];
        data[k * field.degree()] = field.p().one();
        Poly {
            field: field.clone(),
            data,
        }
    }

    /// `x - c`.
    pub fn linear(field: &Field<P>, c: &[P::Residue]) -> Self {
        let mut data = field.neg(c);
        data.extend(field.one());
        Poly {
            field: field.clone(),
            data,
        }
    }

    pub fn random_monic(field: &Field<P>, d: usize, rng: &mut RngHandle) -> Self {
        let mut data = Vec::with_capacity((d + 1) * field.degree());
        for _ in 0..d {
            data.extend(field.random(rng));
        }
        data.extend(field.one());
        Poly {
            field: field.clone(),
            data,
        }
    }

    pub fn field(&self) -> &Field<P> {
        &self.field
    }

    pub fn data(&self) -> &[P::Residue] {
        &self.data
    }

    pub fn into_data(self) -> Vec<P::Residue> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    /// Number of coefficients (0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.data.len() / self.field.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.len().checked_sub(1)
    }

    /// Degree, panicking on the zero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Fe<P> {
        let s = self.field.degree();
        if i < self.len() {
            self.data[i * s..(i + 1) * s].to_vec()
        } else {
            self.field.zero()
        }
    }

    pub fn coeff_slice(&self, i: usize) -> &[P::Residue] {
        let s = self.field.degree();
        &self.data[i * s..(i + 1) * s]
    }

    pub fn coeffs(&self) -> Vec<Fe<P>> {
        self.data
            .chunks(self.field.degree())
            .map(|c| c.to_vec())
            .collect()
    }

    pub fn lead(&self) -> Fe<P> {
        match self.degree() {
            Some(d) => self.coeff(d),
            None => self.field.zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.field.is_one(&self.lead())
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivideByZero);
        }
        let inv = self.field.inv(&self.lead())?;
        Ok(self.scale(&inv))
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "polynomials over different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Poly {
            field: self.field.clone(),
            data: dense::add(&self.field, &self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Poly {
            field: self.field.clone(),
            data: dense::sub(&self.field, &self.data, &other.data),
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            data: self.field.neg(&self.data),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let data = dense::mul(&self.field, &self.data, &other.data);
        Self::from_flat(&self.field, data)
    }

    pub fn scale(&self, c: &[P::Residue]) -> Self {
        Self::from_flat(&self.field, dense::scale(&self.field, &self.data, c))
    }

    pub fn divrem(&self, other: &Self) -> Result<(Self, Self)> {
        self.check(other);
        let (q, r) = dense::divrem(&self.field, &self.data, &other.data)?;
        Ok((
            Poly {
                field: self.field.clone(),
                data: q,
            },
            Poly {
                field: self.field.clone(),
                data: r,
            },
        ))
    }

    pub fn rem(&self, other: &Self) -> Result<Self> {
        Ok(self.divrem(other)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// `(g, u, v)` with `u·self + v·other = g` and `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        self.check(other);
        let (g, u, v) = dense::xgcd(&self.field, &self.data, &other.data);
        let f = &self.field;
        (
            Poly::from_flat(f, g),
            Poly::from_flat(f, u),
            Poly::from_flat(f, v),
        )
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.check(other);
        Poly::from_flat(
            &self.field,
            dense::gcd(&self.field, &self.data, &other.data),
        )
    }

    pub fn eval(&self, x: &[P::Residue]) -> Fe<P> {
        dense::eval(&self.field, &self.data, x)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs: Vec<Fe<P>> = self
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_u64(i as u64)))
            .collect();
        Self::from_coeffs(f, &coeffs)
    }

    /// `self(g)` by Horner's rule, without reduction.
    pub fn compose(&self, g: &Self) -> Self {
        self.check(g);
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for c in self.coeffs().iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(f, c));
        }
        acc
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = Poly::one(&self.field);
        for i in (0..64 - e.leading_zeros()).rev() {
            r = r.mul(&r);
            if (e >> i) & 1 == 1 {
                r = r.mul(self);
            }
        }
        r
    }

    /// Substitutes `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        let f = &self.field;
        let s = f.degree();
        if self.is_zero() {
            return self.clone();
        }
        let mut data = vec![P::Residue::default(); ((self.len() - 1) * k + 1) * s];
        for (i, c) in self.data.chunks(s).enumerate() {
            data[i * k * s..(i * k + 1) * s].clone_from_slice(c);
        }
        Poly {
            field: f.clone(),
            data,
        }
    }

    /// Applies `op` to every coefficient, producing a polynomial over `target`.
    pub fn map_coeffs(
        &self,
        target: &Field<P>,
        mut op: impl FnMut(&[P::Residue]) -> Fe<P>,
    ) -> Self {
        let data: Vec<P::Residue> = self
            .data
            .chunks(self.field.degree())
            .flat_map(&mut op)
            .collect();
        Poly::from_flat(target, data)
    }

    /// Lifts a polynomial over a subfield of `target`.
    pub fn embed(&self, target: &Field<P>) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len() * target.degree());
        for c in self.data.chunks(self.field.degree()) {
            out.extend(target.embed(&self.field, c)?);
        }
        Ok(Poly::from_flat(target, out))
    }

    pub fn powmod(&self, e: &BigUint, modulus: &Self) -> Result<Self> {
        powmod(self, e, modulus)
    }

    /// True if every coefficient lies in the prime field.
    pub fn has_prime_coeffs(&self) -> bool {
        self.data
            .chunks(self.field.degree())
            .all(|c| self.field.is_prime_scalar(c))
    }
}
