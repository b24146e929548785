//! Slice-level polynomial kernels.
//!
//! A polynomial over a field `F` of absolute degree `s` is a flat residue
//! slice whose length is a multiple of `s`; coefficient `i` occupies
//! `[i·s, (i+1)·s)`. Trailing zero coefficients are allowed on input and
//! trimmed on output by the callers that care.

use num_bigint::BigUint;

use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

pub const KARATSUBA_THRESHOLD: usize = 32;

type R<P> = <P as PrimeField>::Residue;

#[inline]
pub fn ncoeffs<P: PrimeField>(f: &Field<P>, a: &[R<P>]) -> usize {
    a.len() / f.degree()
}

pub fn trim<P: PrimeField>(f: &Field<P>, a: &mut Vec<R<P>>) {
    let s = f.degree();
    while a.len() >= s && f.is_zero(&a[a.len() - s..]) {
        a.truncate(a.len() - s);
    }
}

pub fn trimmed<P: PrimeField>(f: &Field<P>, mut a: Vec<R<P>>) -> Vec<R<P>> {
    trim(f, &mut a);
    a
}

pub fn reverse<P: PrimeField>(f: &Field<P>, a: &[R<P>]) -> Vec<R<P>> {
    let s = f.degree();
    let mut out = Vec::with_capacity(a.len());
    for c in a.chunks(s).rev() {
        out.extend_from_slice(c);
    }
    out
}

fn school<P: PrimeField>(pf: &P, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    let (la, lb) = (a.len(), b.len());
    let mut out = Vec::with_capacity(la + lb - 1);
    for k in 0..la + lb - 1 {
        let lo = k.saturating_sub(lb - 1);
        let hi = k.min(la - 1);
        let mut acc = pf.acc_zero();
        for i in lo..=hi {
            pf.acc_mul_add(&mut acc, &a[i], &b[k - i]);
        }
        out.push(pf.acc_reduce(&acc));
    }
    out
}

fn add_into<P: PrimeField>(pf: &P, dst: &mut [R<P>], src: &[R<P>]) {
    for (x, y) in dst.iter_mut().zip(src) {
        *x = pf.add(x, y);
    }
}

fn sub_into<P: PrimeField>(pf: &P, dst: &mut [R<P>], src: &[R<P>]) {
    for (x, y) in dst.iter_mut().zip(src) {
        *x = pf.sub(x, y);
    }
}

fn padd<P: PrimeField>(pf: &P, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_into(pf, &mut out, short);
    out
}

fn kara<P: PrimeField>(pf: &P, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (la, lb) = (a.len(), b.len());
    if la < KARATSUBA_THRESHOLD {
        return school(pf, a, b);
    }
    let mut out = vec![R::<P>::default(); la + lb - 1];
    if 2 * la <= lb {
        for (ci, chunk) in b.chunks(la).enumerate() {
            let part = kara(pf, a, chunk);
            add_into(pf, &mut out[ci * la..], &part);
        }
        return out;
    }
    let h = lb / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = kara(pf, a0, b0);
    let z2 = kara(pf, a1, b1);
    let mut z1 = kara(pf, &padd(pf, a0, a1), &padd(pf, b0, b1));
    sub_into(pf, &mut z1, &z0);
    sub_into(pf, &mut z1, &z2);
    add_into(pf, &mut out, &z0);
    add_into(pf, &mut out[h..], &z1);
    add_into(pf, &mut out[2 * h..], &z2);
    out
}

/// Shortest operand length for which word-sized products go through a
/// single big-integer multiplication.
pub const KRONECKER_THRESHOLD: usize = 24;

fn pack_bits(vals: impl Iterator<Item = u64>, len: usize, slot: usize) -> BigUint {
    let mut limbs = vec![0u32; (len * slot).div_ceil(32) + 5];
    for (i, v) in vals.enumerate() {
        let bit = i * slot;
        let (w, off) = (bit / 32, bit % 32);
        let x = (v as u128) << off;
        limbs[w] |= x as u32;
        limbs[w + 1] |= (x >> 32) as u32;
        limbs[w + 2] |= (x >> 64) as u32;
    }
    BigUint::new(limbs)
}

/// Kronecker substitution into one integer product; `None` when the
/// residues are not machine words.
fn kron_big<P: PrimeField>(pf: &P, a: &[R<P>], b: &[R<P>]) -> Option<Vec<R<P>>> {
    let p = pf.modulus_u64()?;
    let pbits = (64 - (p - 1).leading_zeros()) as usize;
    let n = a.len().min(b.len());
    let slot = 2 * pbits + (usize::BITS - n.leading_zeros()) as usize + 1;
    if slot > 96 {
        return None;
    }
    let pa = pack_bits(
        a.iter().map(|c| pf.to_u64(c).expect("word residue")),
        a.len(),
        slot,
    );
    let pb = pack_bits(
        b.iter().map(|c| pf.to_u64(c).expect("word residue")),
        b.len(),
        slot,
    );
    let digits = (pa * pb).to_u32_digits();
    let len = a.len() + b.len() - 1;
    let mask = (1u128 << slot) - 1;
    let word = |i: usize| digits.get(i).copied().unwrap_or(0) as u128;
    let out = (0..len)
        .map(|i| {
            let bit = i * slot;
            let (w, off) = (bit / 32, bit % 32);
            let x = (word(w) | word(w + 1) << 32 | word(w + 2) << 64 | word(w + 3) << 96) >> off;
            pf.from_u64(((x & mask) % p as u128) as u64)
        })
        .collect();
    Some(out)
}

/// Product of residue polynomials over the prime field.
pub fn fp_mul<P: PrimeField>(pf: &P, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) >= KRONECKER_THRESHOLD {
        if let Some(c) = kron_big(pf, a, b) {
            return c;
        }
    }
    kara(pf, a, b)
}

/// Product of polynomials with coefficients in `f`.
pub fn mul<P: PrimeField>(f: &Field<P>, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let s = f.degree();
    if f.is_prime() {
        return fp_mul(f.p(), a, b);
    }
    if f.depth() == 1 {
        // Kronecker substitution into one prime-field product
        let slot = 2 * s - 1;
        let pack = |v: &[R<P>]| {
            let n = v.len() / s;
            let mut out = vec![R::<P>::default(); (n - 1) * slot + s];
            for (i, c) in v.chunks(s).enumerate() {
                out[i * slot..i * slot + s].clone_from_slice(c);
            }
            out
        };
        let c = fp_mul(f.p(), &pack(a), &pack(b));
        let n = a.len() / s + b.len() / s - 1;
        let mut out = Vec::with_capacity(n * s);
        for k in 0..n {
            let end = ((k + 1) * slot).min(c.len());
            out.extend(f.reduce_slot(&c[k * slot..end]));
        }
        return out;
    }
    let (na, nb) = (a.len() / s, b.len() / s);
    let mut out = vec![R::<P>::default(); (na + nb - 1) * s];
    for i in 0..na {
        let ai = &a[i * s..(i + 1) * s];
        if f.is_zero(ai) {
            continue;
        }
        for j in 0..nb {
            let t = f.mul(ai, &b[j * s..(j + 1) * s]);
            f.add_assign(&mut out[(i + j) * s..(i + j + 1) * s], &t);
        }
    }
    out
}

/// `a^{-1} mod x^n` for `a(0) != 0`; returns exactly `n` coefficients.
pub fn inv_series<P: PrimeField>(f: &Field<P>, a: &[R<P>], n: usize) -> Vec<R<P>> {
    let s = f.degree();
    let na = a.len() / s;
    if n == 0 {
        return Vec::new();
    }
    let b0 = f
        .inv(&a[..s])
        .expect("series with invertible constant term");
    let mut out: Vec<R<P>> = Vec::with_capacity(n * s);
    out.extend_from_slice(&b0);
    if f.is_prime() {
        let pf = f.p();
        for k in 1..n {
            let mut acc = pf.acc_zero();
            for i in 1..=k.min(na - 1) {
                pf.acc_mul_add(&mut acc, &a[i], &out[k - i]);
            }
            let v = pf.acc_reduce(&acc);
            out.push(pf.neg(&pf.mul(&v, &b0[0])));
        }
        return out;
    }
    for k in 1..n {
        let mut acc = f.zero();
        for i in 1..=k.min(na - 1) {
            let t = f.mul(&a[i * s..(i + 1) * s], &out[(k - i) * s..(k - i + 1) * s]);
            f.add_assign(&mut acc, &t);
        }
        let v = f.neg(&f.mul(&acc, &b0));
        out.extend(v);
    }
    out
}

/// Quotient and remainder; `b` must have a nonzero leading coefficient.
pub fn divrem<P: PrimeField>(
    f: &Field<P>,
    a: &[R<P>],
    b: &[R<P>],
) -> Result<(Vec<R<P>>, Vec<R<P>>)> {
    let s = f.degree();
    let b = trimmed(f, b.to_vec());
    if b.is_empty() {
        return Err(Error::DivideByZero);
    }
    let mut r = trimmed(f, a.to_vec());
    let nb = b.len() / s;
    let na = r.len() / s;
    if na < nb {
        return Ok((Vec::new(), r));
    }
    let lead_inv = f.inv(&b[(nb - 1) * s..])?;
    let mut q = vec![R::<P>::default(); (na - nb + 1) * s];
    if f.is_prime() {
        let pf = f.p();
        let li = &lead_inv[0];
        for k in (nb - 1..na).rev() {
            if pf.is_zero(&r[k]) {
                continue;
            }
            let c = pf.mul(&r[k], li);
            let off = k + 1 - nb;
            for i in 0..nb {
                r[off + i] = pf.sub(&r[off + i], &pf.mul(&c, &b[i]));
            }
            q[off] = c;
        }
    } else {
        let monic = f.is_one(&lead_inv);
        for k in (nb - 1..na).rev() {
            let rk = &r[k * s..(k + 1) * s];
            if f.is_zero(rk) {
                continue;
            }
            let c = if monic {
                rk.to_vec()
            } else {
                f.mul(rk, &lead_inv)
            };
            let off = k + 1 - nb;
            for i in 0..nb {
                let t = f.mul(&c, &b[i * s..(i + 1) * s]);
                f.sub_assign(&mut r[(off + i) * s..(off + i + 1) * s], &t);
            }
            q[off * s..(off + 1) * s].clone_from_slice(&c);
        }
    }
    r.truncate((nb - 1) * s);
    trim(f, &mut r);
    trim(f, &mut q);
    Ok((q, r))
}

pub fn rem<P: PrimeField>(f: &Field<P>, a: &[R<P>], b: &[R<P>]) -> Result<Vec<R<P>>> {
    Ok(divrem(f, a, b)?.1)
}

/// Extended gcd: `(g, u, v)` with `u·a + v·b = g`, `g` monic (or zero).
#[allow(clippy::type_complexity)]
pub fn xgcd<P: PrimeField>(
    f: &Field<P>,
    a: &[R<P>],
    b: &[R<P>],
) -> (Vec<R<P>>, Vec<R<P>>, Vec<R<P>>) {
    let mut r0 = trimmed(f, a.to_vec());
    let mut r1 = trimmed(f, b.to_vec());
    let mut s0 = f.one();
    let mut s1: Vec<R<P>> = Vec::new();
    let mut t0: Vec<R<P>> = Vec::new();
    let mut t1 = f.one();
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1).expect("nonzero divisor");
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_empty() {
        return (r0, trimmed(f, s0), trimmed(f, t0));
    }
    let s = f.degree();
    let lead = f
        .inv(&r0[r0.len() - s..])
        .expect("nonzero leading coefficient");
    (
        scale(f, &r0, &lead),
        trimmed(f, scale(f, &s0, &lead)),
        trimmed(f, scale(f, &t0, &lead)),
    )
}

/// Monic gcd.
pub fn gcd<P: PrimeField>(f: &Field<P>, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    let mut r0 = trimmed(f, a.to_vec());
    let mut r1 = trimmed(f, b.to_vec());
    while !r1.is_empty() {
        let r = rem(f, &r0, &r1).expect("nonzero divisor");
        r0 = std::mem::replace(&mut r1, r);
    }
    if r0.is_empty() {
        return r0;
    }
    let s = f.degree();
    let lead = f
        .inv(&r0[r0.len() - s..])
        .expect("nonzero leading coefficient");
    scale(f, &r0, &lead)
}

/// Inverse of `a` modulo `m`.
pub fn inverse_mod<P: PrimeField>(f: &Field<P>, a: &[R<P>], m: &[R<P>]) -> Result<Vec<R<P>>> {
    if f.is_prime() {
        return fp_inverse_mod(f.p(), a, m);
    }
    let (g, u, _) = xgcd(f, a, m);
    let s = f.degree();
    if g.len() != s {
        return Err(Error::ZeroInverse);
    }
    Ok(u)
}

/// Inverse modulo `m` over the prime field, tracking only the Bezout
/// coefficient of `a`.
fn fp_inverse_mod<P: PrimeField>(pf: &P, a: &[R<P>], m: &[R<P>]) -> Result<Vec<R<P>>> {
    let trim_fp = |v: &mut Vec<R<P>>| {
        while v.last().is_some_and(|c| pf.is_zero(c)) {
            v.pop();
        }
    };
    let mut r0: Vec<R<P>> = m.to_vec();
    trim_fp(&mut r0);
    let mut r1: Vec<R<P>> = a.to_vec();
    trim_fp(&mut r1);
    let mut t0: Vec<R<P>> = Vec::new();
    let mut t1: Vec<R<P>> = vec![pf.one()];
    while !r1.is_empty() {
        // one division step r0 = q r1 + r, updating t0 - q t1 on the fly
        let li = pf.inv(r1.last().unwrap())?;
        let n1 = r1.len();
        let mut t2 = t0.clone();
        while r0.len() >= n1 {
            let k = r0.len() - n1;
            let c = pf.mul(r0.last().unwrap(), &li);
            for i in 0..n1 {
                r0[k + i] = pf.sub(&r0[k + i], &pf.mul(&c, &r1[i]));
            }
            r0.pop();
            trim_fp(&mut r0);
            if t2.len() < k + t1.len() {
                t2.resize(k + t1.len(), R::<P>::default());
            }
            for (i, ti) in t1.iter().enumerate() {
                t2[k + i] = pf.sub(&t2[k + i], &pf.mul(&c, ti));
            }
        }
        trim_fp(&mut t2);
        std::mem::swap(&mut r0, &mut r1);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.len() != 1 {
        return Err(Error::ZeroInverse);
    }
    let c = pf.inv(&r0[0])?;
    Ok(t0.iter().map(|x| pf.mul(x, &c)).collect())
}

pub fn add<P: PrimeField>(f: &Field<P>, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    let out = padd(f.p(), a, b);
    trimmed(f, out)
}

pub fn sub<P: PrimeField>(f: &Field<P>, a: &[R<P>], b: &[R<P>]) -> Vec<R<P>> {
    let pf = f.p();
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), R::<P>::default());
    }
    sub_into(pf, &mut out, b);
    trimmed(f, out)
}

/// Multiplies every coefficient by the field element `c`.
pub fn scale<P: PrimeField>(f: &Field<P>, a: &[R<P>], c: &[R<P>]) -> Vec<R<P>> {
    let s = f.degree();
    if f.is_one(c) {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len());
    for chunk in a.chunks(s) {
        out.extend(f.mul(chunk, c));
    }
    out
}

/// Evaluates at a field element by Horner's rule.
pub fn eval<P: PrimeField>(f: &Field<P>, a: &[R<P>], x: &[R<P>]) -> Fe<P> {
    let s = f.degree();
    let mut acc = f.zero();
    for c in a.chunks(s).rev() {
        acc = f.mul(&acc, x);
        f.add_assign(&mut acc, c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, RngHandle};

    #[test]
    fn karatsuba_matches_schoolbook() {
        let pf = Fp64::new(13).unwrap();
        let mut rng = RngHandle::new(4, 4);
        for (la, lb) in [(40, 40), (33, 100), (64, 31), (200, 150), (1, 300)] {
            let a: Vec<u64> = (0..la).map(|_| rng.below(13)).collect();
            let b: Vec<u64> = (0..lb).map(|_| rng.below(13)).collect();
            assert_eq!(fp_mul(&pf, &a, &b), school(&pf, &a, &b));
        }
    }

    #[test]
    fn big_integer_product_matches_karatsuba() {
        let mut rng = RngHandle::new(4, 5);
        for p in [2u64, 3, 13, 65537, (1 << 31) - 1, (1 << 61) - 1] {
            let pf = Fp64::new(p).unwrap();
            for (la, lb) in [(24, 24), (40, 300), (257, 255), (1000, 999)] {
                let a: Vec<u64> = (0..la).map(|_| rng.below(p)).collect();
                let b: Vec<u64> = (0..lb).map(|_| rng.below(p)).collect();
                let all_max = vec![p - 1; la];
                assert_eq!(fp_mul(&pf, &a, &b), kara(&pf, &a, &b), "p={p}");
                assert_eq!(
                    fp_mul(&pf, &all_max, &all_max),
                    kara(&pf, &all_max, &all_max),
                    "p={p}"
                );
            }
        }
    }

    #[test]
    fn kronecker_matches_direct_products() {
        let f3 = Field::prime(Fp64::new(3).unwrap());
        let k = Field::extension(&f3, vec![1, 2, 0, 1]).unwrap();
        let mut rng = RngHandle::new(8, 1);
        let a: Vec<u64> = (0..5).flat_map(|_| k.random(&mut rng)).collect();
        let b: Vec<u64> = (0..7).flat_map(|_| k.random(&mut rng)).collect();
        let c = mul(&k, &a, &b);
        let mut expect = vec![0u64; 11 * 3];
        for i in 0..5 {
            for j in 0..7 {
                let t = k.mul(&a[i * 3..i * 3 + 3], &b[j * 3..j * 3 + 3]);
                k.add_assign(&mut expect[(i + j) * 3..(i + j + 1) * 3], &t);
            }
        }
        assert_eq!(c, expect);
    }

    #[test]
    fn fp_inverse_agrees_with_xgcd() {
        let f7 = Field::prime(Fp64::new(7).unwrap());
        let m = vec![3u64, 0, 0, 1]; // x^3 + 3, irreducible over F7
        let mut rng = RngHandle::new(1, 2);
        for _ in 0..50 {
            let a: Vec<u64> = (0..3).map(|_| rng.below(7)).collect();
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            let inv = inverse_mod(&f7, &a, &m).unwrap();
            let (_, u, _) = xgcd(&f7, &a, &m);
            assert_eq!(trimmed(&f7, inv.clone()), u);
            let prod = rem(&f7, &mul(&f7, &a, &inv), &m).unwrap();
            assert_eq!(prod, vec![1]);
        }
    }
}
