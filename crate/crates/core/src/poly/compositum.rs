//! Minimal polynomials of sums and products of roots of two irreducible
//! polynomials of coprime degrees, via `Res_y(f1(y), f2(x - y))` computed
//! by evaluation and interpolation.

use num_bigint::BigUint;
use num_integer::Integer;

use super::Poly;
use crate::arith::PrimeField;
use crate::classic::first_irreducible;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// `prod_{a(α)=0} b(α)` for monic `a`.
pub fn resultant_monic<P: PrimeField>(a: &Poly<P>, b: &Poly<P>) -> Result<Fe<P>> {
    let f = a.field();
    let m = a.deg();
    if m == 0 {
        return Ok(f.one());
    }
    let c = b.rem(a)?;
    if c.is_zero() {
        return Ok(f.zero());
    }
    let k = c.deg();
    let lc = c.lead();
    if k == 0 {
        return Ok(f.pow_u64(&lc, m as u64));
    }
    let mut r = f.mul(&f.pow_u64(&lc, m as u64), &resultant_monic(&c.monic()?, a)?);
    if (m * k) % 2 == 1 {
        r = f.neg(&r);
    }
    Ok(r)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Sum,
    Product,
}

/// Minimal polynomial of `α1 + α2`.
pub fn composed_sum<P: PrimeField>(f1: &Poly<P>, f2: &Poly<P>) -> Result<Poly<P>> {
    composed(f1, f2, Op::Sum)
}

/// Minimal polynomial of `α1 · α2`.
pub fn composed_product<P: PrimeField>(f1: &Poly<P>, f2: &Poly<P>) -> Result<Poly<P>> {
    composed(f1, f2, Op::Product)
}

fn composed<P: PrimeField>(f1: &Poly<P>, f2: &Poly<P>, op: Op) -> Result<Poly<P>> {
    let k = f1.field().clone();
    if !f1.is_monic() || !f2.is_monic() {
        return Err(Error::PreconditionViolated(
            "composed sum needs monic inputs".into(),
        ));
    }
    let (d1, d2) = (f1.deg(), f2.deg());
    if d1.gcd(&d2) != 1 {
        return Err(Error::NotCoprimeDegrees(d1, d2));
    }
    let n = d1 * d2;
    if k.order() > &BigUint::from(n) {
        return interpolate(f1, f2, op);
    }
    // lift to an extension with more than n points
    let mut deg = 1usize;
    while k.order().pow(deg as u32) <= BigUint::from(n) {
        deg += 1;
    }
    let g = first_irreducible(&k, deg);
    let e = Field::extension(&k, g.into_data())?;
    let h = interpolate(&f1.embed(&e)?, &f2.embed(&e)?, op)?;
    let s = k.degree();
    let mut coeffs = Vec::with_capacity(h.len());
    for c in h.coeffs() {
        if !e.is_zero(&c[s..]) {
            return Err(Error::Internal(
                "compositum coefficient outside the base field".into(),
            ));
        }
        coeffs.push(c[..s].to_vec());
    }
    Ok(Poly::from_coeffs(&k, &coeffs))
}

fn interpolate<P: PrimeField>(f1: &Poly<P>, f2: &Poly<P>, op: Op) -> Result<Poly<P>> {
    let f = f1.field();
    let (d1, d2) = (f1.deg(), f2.deg());
    let n = d1 * d2;
    let c2 = f2.coeffs();
    let points: Vec<Fe<P>> = (0..n).map(|i| f.from_index(&BigUint::from(i))).collect();
    let mut values = Vec::with_capacity(n);
    for x0 in &points {
        let g = match op {
            // f2(x0 - y)
            Op::Sum => f2.compose(&Poly::from_coeffs(f, &[x0.clone(), f.from_i64(-1)])),
            // y^d2 f2(x0 / y)
            Op::Product => {
                let mut cs = vec![f.zero(); d2 + 1];
                let mut xp = f.one();
                for (j, c) in c2.iter().enumerate() {
                    cs[d2 - j] = f.mul(c, &xp);
                    xp = f.mul(&xp, x0);
                }
                Poly::from_coeffs(f, &cs)
            }
        };
        let r = resultant_monic(f1, &g)?;
        // interpolate h(x) - x^n
        values.push(f.sub(&r, &f.pow_u64(x0, n as u64)));
    }
    let low = newton_interpolate(f, &points, &values)?;
    Ok(low.add(&Poly::monomial(f, n)))
}

/// Polynomial of degree `< points.len()` through the given values.
pub fn newton_interpolate<P: PrimeField>(
    f: &Field<P>,
    points: &[Fe<P>],
    values: &[Fe<P>],
) -> Result<Poly<P>> {
    let n = points.len();
    let mut coef: Vec<Fe<P>> = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(&coef[i], &coef[i - 1]);
            let den = f.sub(&points[i], &points[i - j]);
            coef[i] = f.div(&num, &den)?;
        }
    }
    let mut acc = Poly::zero(f);
    for i in (0..n).rev() {
        acc = acc
            .mul(&Poly::linear(f, &points[i]))
            .add(&Poly::constant(f, &coef[i]));
    }
    Ok(acc)
}
