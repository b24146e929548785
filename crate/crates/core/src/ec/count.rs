//! Point counting: exhaustive for small fields, baby-step giant-step on
//! random points in the Hasse interval otherwise.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Curve, Point};
use crate::arith::primality::{factor_u64, is_prime_u64, isqrt_u128, valuation};
use crate::arith::rng::mix;
use crate::arith::{PrimeField, RngHandle};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Largest field size counted by sweeping all abscissae.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 12;
/// Fields must have fewer than `2^62` elements for baby-step giant-step.
pub const BSGS_BITS: u64 = 62;

const COUNT_SEED: u64 = 0x6563_2d63_6f75_6e74;

pub(crate) fn field_size<P: PrimeField>(k: &Field<P>) -> Result<u64> {
    match k.order().to_u64() {
        Some(q) if q < 1 << BSGS_BITS => Ok(q),
        _ => Err(Error::FieldTooLarge(format!(
            "point counting needs q < 2^{BSGS_BITS}"
        ))),
    }
}

/// `[q + 1 - floor(2 sqrt q), q + 1 + floor(2 sqrt q)]`.
pub fn hasse_interval(q: u64) -> (u64, u64) {
    let w = isqrt_u128(4 * q as u128) as u64;
    (q + 1 - w, q + 1 + w)
}

/// `#E(F_q)`.
pub fn curve_order<P: PrimeField>(e: &Curve<P>) -> Result<u64> {
    let k = e.field();
    let q = field_size(k)?;
    if q <= EXHAUSTIVE_LIMIT {
        let affine: usize = (0..q)
            .map(|i| e.y_count(&k.from_index(&BigUint::from(i))))
            .sum();
        return Ok(affine as u64 + 1);
    }
    let stream = e
        .coefficients()
        .iter()
        .fold(q, |acc, c| mix(acc, k.to_index_u64(c)));
    let mut rng = RngHandle::new(COUNT_SEED, stream);
    order_bsgs(e, q, &mut rng)
}

fn order_bsgs<P: PrimeField>(e: &Curve<P>, q: u64, rng: &mut RngHandle) -> Result<u64> {
    let (lo, hi) = hasse_interval(q);
    let mut l = 1u64;
    for _ in 0..32 {
        let p = e.random_point(rng);
        let k = find_multiple(e, &p, lo, hi)
            .ok_or_else(|| Error::Internal("no order in the Hasse interval".into()))?;
        let ord = order_from_multiple(e, &p, k);
        l = l.lcm(&ord);
        let first = lo.div_ceil(l) * l;
        if first <= hi && first + l > hi {
            return Ok(first);
        }
    }
    Err(Error::AmbiguousOrder)
}

/// Exact order of `p` given a multiple `k` of it.
pub fn order_from_multiple<P: PrimeField>(e: &Curve<P>, p: &Point<P>, k: u64) -> u64 {
    let mut ord = k;
    for (r, mult) in factor_u64(k) {
        for _ in 0..mult {
            if e.mul_u64(ord / r, p).is_infinity() {
                ord /= r;
            } else {
                break;
            }
        }
    }
    ord
}

/// Some `k` in `[lo, hi]` with `k p = O`, by baby-step giant-step.
pub fn find_multiple<P: PrimeField>(e: &Curve<P>, p: &Point<P>, lo: u64, hi: u64) -> Option<u64> {
    if lo > hi {
        return None;
    }
    if p.is_infinity() {
        return Some(lo);
    }
    let width = hi - lo;
    let m = (isqrt_u128(width as u128 + 1) as u64 + 1).max(1);
    let mut baby: HashMap<Fe<P>, Vec<(u64, Fe<P>)>> = HashMap::with_capacity(m as usize);
    let mut cur = Point::Infinity;
    for r in 1..=m {
        cur = e.add(&cur, p);
        match &cur {
            Point::Infinity => {
                // small order: the least multiple of r in range
                let k = lo.div_ceil(r) * r;
                return (k <= hi).then_some(k);
            }
            Point::Affine(x, y) => baby.entry(x.clone()).or_default().push((r, y.clone())),
        }
    }
    let step = cur;
    let mut g = e.mul_u64(lo, p);
    let mut i = 0u64;
    loop {
        let base = lo + i * m;
        if base > hi + m {
            return None;
        }
        match &g {
            Point::Infinity => {
                if base <= hi {
                    return Some(base);
                }
            }
            Point::Affine(x, y) => {
                if let Some(list) = baby.get(x) {
                    for (r, yr) in list {
                        let k = if yr == y {
                            base.checked_sub(*r)
                        } else {
                            Some(base + r)
                        };
                        if let Some(k) = k {
                            if (lo..=hi).contains(&k) {
                                return Some(k);
                            }
                        }
                    }
                }
            }
        }
        g = e.add(&g, &step);
        i += 1;
    }
}

/// False only if `ell` certainly does not divide `#E`.
pub fn maybe_divisible<P: PrimeField>(e: &Curve<P>, ell: u64, rng: &mut RngHandle) -> Result<bool> {
    let q = field_size(e.field())?;
    let (lo, hi) = hasse_interval(q);
    let p = e.mul_u64(ell, &e.random_point(rng));
    Ok(find_multiple(e, &p, lo.div_ceil(ell), hi / ell).is_some())
}

fn check_ell<P: PrimeField>(k: &Field<P>, ell: u64) -> Result<u64> {
    let q = field_size(k)?;
    if !is_prime_u64(ell) {
        return Err(Error::PreconditionViolated(format!("{ell} is not prime")));
    }
    if (q - 1) % ell == 0 || k.characteristic() == &BigUint::from(ell) {
        return Err(Error::PreconditionViolated(format!(
            "{ell} divides p(q - 1)"
        )));
    }
    Ok(q)
}

/// Random curve over `k` whose order is divisible by `ell`.
pub fn find_curve_with_ell_torsion<P: PrimeField>(
    k: &Field<P>,
    ell: u64,
    rng: &mut RngHandle,
    max_trials: usize,
) -> Result<(Curve<P>, u64)> {
    let q = check_ell(k, ell)?;
    let (lo, hi) = hasse_interval(q);
    if lo.div_ceil(ell) * ell > hi {
        return Err(Error::TrialsExhausted(0));
    }
    for _ in 0..max_trials {
        let e = Curve::random(k, rng);
        if q > EXHAUSTIVE_LIMIT && !maybe_divisible(&e, ell, rng)? {
            continue;
        }
        match curve_order(&e) {
            Ok(n) if n % ell == 0 => return Ok((e, n)),
            Ok(_) | Err(Error::AmbiguousOrder) => continue,
            Err(err) => return Err(err),
        }
    }
    Err(Error::TrialsExhausted(max_trials))
}

/// Generator of the (cyclic) `ell`-Sylow subgroup of `E(K)`, with the
/// valuation `e` of `n = #E(K)`.
pub fn sylow_point<P: PrimeField>(
    e: &Curve<P>,
    n: u64,
    ell: u64,
    rng: &mut RngHandle,
) -> Result<(Point<P>, u32)> {
    let v = valuation(n, ell);
    if v == 0 {
        return Err(Error::PreconditionViolated(format!(
            "{ell} does not divide the group order"
        )));
    }
    let cof = n / ell.pow(v);
    let top = ell.pow(v - 1);
    for _ in 0..64 * ell as usize {
        let a = e.mul_u64(cof, &e.random_point(rng));
        if !e.mul_u64(top, &a).is_infinity() {
            return Ok((a, v));
        }
    }
    Err(Error::NoGenerator)
}

/// Rational point of order exactly `ell`.
pub fn torsion_point<P: PrimeField>(
    e: &Curve<P>,
    n: u64,
    ell: u64,
    rng: &mut RngHandle,
) -> Result<Point<P>> {
    let v = valuation(n, ell);
    if v == 0 {
        return Err(Error::TorsionNotFound(ell));
    }
    let cof = n / ell.pow(v);
    for _ in 0..64 * ell as usize {
        let mut r = e.mul_u64(cof, &e.random_point(rng));
        if r.is_infinity() {
            continue;
        }
        loop {
            let next = e.mul_u64(ell, &r);
            if next.is_infinity() {
                return Ok(r);
            }
            r = next;
        }
    }
    Err(Error::TorsionNotFound(ell))
}
