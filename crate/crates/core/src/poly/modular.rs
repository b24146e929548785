//! Arithmetic modulo a fixed polynomial: reduction, powering, modular
//! composition, Frobenius powers and minimal polynomials.

use num_bigint::BigUint;

use super::{dense, Poly};
use crate::arith::{PrimeField, RngHandle};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

type R<P> = <P as PrimeField>::Residue;

/// A monic modulus with a precomputed reversed inverse for Barrett
/// reduction.
#[derive(Clone, Debug)]
pub struct Modulus<P: PrimeField> {
    f: Poly<P>,
    n: usize,
    rinv: Vec<R<P>>,
}

impl<P: PrimeField> Modulus<P> {
    pub fn new(f: &Poly<P>) -> Result<Self> {
        if !f.is_monic() || f.deg() == 0 {
            return Err(Error::PreconditionViolated(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        let field = f.field();
        let n = f.deg();
        let rev = dense::reverse(field, f.data());
        let rinv = dense::inv_series(field, &rev, n);
        Ok(Modulus {
            f: f.clone(),
            n,
            rinv,
        })
    }

    pub fn poly(&self) -> &Poly<P> {
        &self.f
    }

    pub fn field(&self) -> &Field<P> {
        self.f.field()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn reduce_flat(&self, a: Vec<R<P>>) -> Vec<R<P>> {
        let field = self.f.field();
        let s = field.degree();
        let na = a.len() / s;
        let n = self.n;
        if na <= n {
            return dense::trimmed(field, a);
        }
        let qlen = na - n;
        let barrett = qlen <= n && (n >= 16 || !field.is_prime());
        if !barrett {
            return dense::rem(field, &a, self.f.data()).expect("monic modulus");
        }
        let hi = dense::reverse(field, &a[n * s..]);
        let mut q = dense::mul(field, &hi, &self.rinv[..qlen * s]);
        q.resize(qlen * s, R::<P>::default());
        q.truncate(qlen * s);
        let q = dense::reverse(field, &q);
        let qf = dense::mul(field, &q, self.f.data());
        let pf = field.p();
        let mut r = a;
        r.truncate(n * s);
        for (x, y) in r.iter_mut().zip(&qf) {
            *x = pf.sub(x, y);
        }
        dense::trimmed(field, r)
    }

    pub fn reduce(&self, a: &Poly<P>) -> Poly<P> {
        Poly::from_flat(self.field(), self.reduce_flat(a.data().to_vec()))
    }

    pub fn mulmod(&self, a: &Poly<P>, b: &Poly<P>) -> Poly<P> {
        let field = self.field();
        let prod = dense::mul(field, a.data(), b.data());
        Poly::from_flat(field, self.reduce_flat(prod))
    }

    pub fn powmod(&self, a: &Poly<P>, e: &BigUint) -> Poly<P> {
        let base = self.reduce(a);
        let mut r = Poly::one(self.field());
        for i in (0..e.bits()).rev() {
            r = self.mulmod(&r, &r);
            if e.bit(i) {
                r = self.mulmod(&r, &base);
            }
        }
        r
    }

    /// Inverse modulo `f`, if it exists.
    pub fn invmod(&self, a: &Poly<P>) -> Result<Poly<P>> {
        let field = self.field();
        let inv = dense::inverse_mod(field, a.data(), self.f.data())?;
        Ok(Poly::from_flat(field, inv))
    }

    /// Brent-Kung table of the powers of `h` modulo `f`.
    pub fn composition_table(&self, h: &Poly<P>, max_len: usize) -> CompositionTable<P> {
        let m = ((max_len.max(1) as f64).sqrt().ceil() as usize).max(1);
        let h = self.reduce(h);
        let mut baby = Vec::with_capacity(m + 1);
        baby.push(Poly::one(self.field()));
        for i in 1..=m {
            let next = self.mulmod(&baby[i - 1], &h);
            baby.push(next);
        }
        CompositionTable { m, baby }
    }

    /// `g(h) mod f`.
    pub fn compose(&self, g: &Poly<P>, h: &Poly<P>) -> Poly<P> {
        let table = self.composition_table(h, g.len());
        table.apply(self, g)
    }
}

/// Baby steps `h^0 .. h^m` modulo a fixed `f`.
#[derive(Clone, Debug)]
pub struct CompositionTable<P: PrimeField> {
    m: usize,
    baby: Vec<Poly<P>>,
}

impl<P: PrimeField> CompositionTable<P> {
    /// Evaluates `g` at the tabulated `h`, modulo `modulus`.
    pub fn apply(&self, modulus: &Modulus<P>, g: &Poly<P>) -> Poly<P> {
        let field = modulus.field();
        let s = field.degree();
        let n = modulus.degree();
        let m = self.m;
        let len = g.len();
        if len == 0 {
            return Poly::zero(field);
        }
        let blocks = len.div_ceil(m);
        let giant = &self.baby[m];
        let mut acc = Poly::zero(field);
        for j in (0..blocks).rev() {
            // sum_i g_{jm+i} h^i as a combination of the baby steps
            let mut block = vec![R::<P>::default(); n * s];
            if field.is_prime() {
                let pf = field.p();
                for (t, out) in block.iter_mut().enumerate() {
                    let mut a = pf.acc_zero();
                    for i in 0..m.min(len - j * m) {
                        let c = &g.data()[j * m + i];
                        let b = &self.baby[i];
                        if t < b.len() && !pf.is_zero(c) {
                            pf.acc_mul_add(&mut a, c, &b.data()[t]);
                        }
                    }
                    *out = pf.acc_reduce(&a);
                }
            } else {
                for i in 0..m.min(len - j * m) {
                    let c = g.coeff_slice(j * m + i);
                    if field.is_zero(c) {
                        continue;
                    }
                    let b = &self.baby[i];
                    for t in 0..b.len() {
                        let v = field.mul(c, b.coeff_slice(t));
                        field.add_assign(&mut block[t * s..(t + 1) * s], &v);
                    }
                }
            }
            let block = Poly::from_flat(field, block);
            acc = modulus.mulmod(&acc, giant).add(&block);
        }
        acc
    }
}

/// `a^e mod f`.
pub fn powmod<P: PrimeField>(a: &Poly<P>, e: &BigUint, f: &Poly<P>) -> Result<Poly<P>> {
    Ok(Modulus::new(f)?.powmod(a, e))
}

/// `f(g) mod h` by Brent-Kung baby-step/giant-step.
pub fn modcomp<P: PrimeField>(f: &Poly<P>, g: &Poly<P>, h: &Poly<P>) -> Result<Poly<P>> {
    Ok(Modulus::new(h)?.compose(f, g))
}

/// `x^(q^k) mod h` where `q` is the order of the coefficient field:
/// one powering for `x^q`, then `k - 1` self-compositions.
pub fn frobenius_power<P: PrimeField>(h: &Poly<P>, k: usize) -> Result<Poly<P>> {
    let md = Modulus::new(h)?;
    frobenius_power_with(&md, k)
}

pub fn frobenius_power_with<P: PrimeField>(md: &Modulus<P>, k: usize) -> Result<Poly<P>> {
    let field = md.field();
    let x = md.reduce(&Poly::x(field));
    if k == 0 {
        return Ok(x);
    }
    let xq = md.powmod(&x, field.order());
    let table = md.composition_table(&xq, md.degree());
    let mut cur = xq.clone();
    for _ in 1..k {
        cur = table.apply(md, &cur);
    }
    Ok(cur)
}

/// Minimal polynomial of `g mod f` over the coefficient field, by
/// incremental Gaussian elimination on the powers of `g`.
pub fn minpoly_mod<P: PrimeField>(g: &Poly<P>, f: &Poly<P>) -> Result<Poly<P>> {
    let md = Modulus::new(f)?;
    minpoly_dense(&md, g)
}

pub fn minpoly_dense<P: PrimeField>(md: &Modulus<P>, g: &Poly<P>) -> Result<Poly<P>> {
    let field = md.field();
    let n = md.degree();
    let g = md.reduce(g);
    let mut power = Poly::one(field);
    first_relation(field, n, |_| {
        let v = (0..n).map(|t| power.coeff(t)).collect();
        power = md.mulmod(&power, &g);
        v
    })
}

/// Minimal polynomial over `sub` of an element of `big`, where `sub`
/// lies in the tower below `big`. Coordinates over `sub` are the
/// contiguous chunks of the flat representation.
pub fn minpoly_over<P: PrimeField>(big: &Field<P>, a: &[R<P>], sub: &Field<P>) -> Result<Poly<P>> {
    let s = sub.degree();
    let n = big.degree() / s;
    let mut power = big.one();
    first_relation(sub, n, |_| {
        let v = power.chunks(s).map(|c| c.to_vec()).collect();
        power = big.mul(&power, a);
        v
    })
}

/// Feeds vectors `v_0, v_1, ...` of length `n` into an incremental
/// elimination and returns the first monic relation
/// `sum_{j<=i} c_j v_j = 0` as a polynomial.
fn first_relation<P: PrimeField>(
    field: &Field<P>,
    n: usize,
    mut next: impl FnMut(usize) -> Vec<Fe<P>>,
) -> Result<Poly<P>> {
    // rows: (pivot, normalized vector, combination of the inputs)
    let mut rows: Vec<(usize, Vec<Fe<P>>, Vec<Fe<P>>)> = Vec::new();
    for i in 0..=n {
        let mut v = next(i);
        let mut comb = vec![field.zero(); n + 1];
        comb[i] = field.one();
        for (piv, row, rc) in &rows {
            let factor = v[*piv].clone();
            if field.is_zero(&factor) {
                continue;
            }
            for t in 0..n {
                if !field.is_zero(&row[t]) {
                    let d = field.mul(&factor, &row[t]);
                    field.sub_assign(&mut v[t], &d);
                }
            }
            for t in 0..=i {
                if !field.is_zero(&rc[t]) {
                    let d = field.mul(&factor, &rc[t]);
                    field.sub_assign(&mut comb[t], &d);
                }
            }
        }
        match v.iter().position(|c| !field.is_zero(c)) {
            None => {
                comb.truncate(i + 1);
                return Ok(Poly::from_coeffs(field, &comb));
            }
            Some(piv) => {
                let inv = field.inv(&v[piv])?;
                let v: Vec<Fe<P>> = v.iter().map(|c| field.mul(c, &inv)).collect();
                let comb: Vec<Fe<P>> = comb.iter().map(|c| field.mul(c, &inv)).collect();
                rows.push((piv, v, comb));
            }
        }
    }
    Err(Error::Internal(
        "minimal polynomial exceeds the ambient dimension".into(),
    ))
}

/// Berlekamp-Massey over a field: the minimal connection polynomial of
/// `seq`, returned as the monic annihilating polynomial
/// `x^L - c_1 x^{L-1} - ... - c_L`.
pub fn berlekamp_massey<P: PrimeField>(field: &Field<P>, seq: &[Fe<P>]) -> Poly<P> {
    let mut c: Vec<Fe<P>> = vec![field.one()];
    let mut b: Vec<Fe<P>> = vec![field.one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut bd = field.one();
    for nidx in 0..seq.len() {
        let mut disc = seq[nidx].clone();
        for i in 1..=l.min(c.len() - 1) {
            let t = field.mul(&c[i], &seq[nidx - i]);
            field.add_assign(&mut disc, &t);
        }
        if field.is_zero(&disc) {
            shift += 1;
            continue;
        }
        let coef = field.mul(&disc, &field.inv(&bd).expect("nonzero discrepancy"));
        let old = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, field.zero());
        }
        for (i, bi) in b.iter().enumerate() {
            let t = field.mul(&coef, bi);
            field.sub_assign(&mut c[i + shift], &t);
        }
        if 2 * l <= nidx {
            l = nidx + 1 - l;
            b = old;
            bd = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, field.zero());
    c.reverse();
    Poly::from_coeffs(field, &c)
}

/// Minimal polynomial by power projection and Berlekamp-Massey, checked
/// by evaluation; retries with fresh projections on an unlucky draw.
pub fn minpoly_bm<P: PrimeField>(g: &Poly<P>, f: &Poly<P>, rng: &mut RngHandle) -> Result<Poly<P>> {
    let md = Modulus::new(f)?;
    minpoly_projection(&md, g, rng)
}

pub fn minpoly_projection<P: PrimeField>(
    md: &Modulus<P>,
    g: &Poly<P>,
    rng: &mut RngHandle,
) -> Result<Poly<P>> {
    let field = md.field();
    let n = md.degree();
    let s = field.degree();
    let g = md.reduce(g);
    let mut powers = Vec::with_capacity(2 * n);
    let mut cur = Poly::one(field);
    for _ in 0..2 * n {
        let next = md.mulmod(&cur, &g);
        powers.push(cur);
        cur = next;
    }
    for _ in 0..8 {
        let proj: Vec<Fe<P>> = (0..n).map(|_| field.random(rng)).collect();
        let seq: Vec<Fe<P>> = powers
            .iter()
            .map(|pw| {
                let mut acc = field.zero();
                for (t, c) in pw.data().chunks(s).enumerate() {
                    field.add_assign(&mut acc, &field.mul(c, &proj[t]));
                }
                acc
            })
            .collect();
        let cand = berlekamp_massey(field, &seq);
        if md.compose(&cand, &g).is_zero() {
            return Ok(cand);
        }
    }
    minpoly_dense(md, &g)
}

/// Characteristic polynomial of multiplication by `g` modulo `f`.
pub fn charpoly_mod<P: PrimeField>(g: &Poly<P>, f: &Poly<P>) -> Result<Poly<P>> {
    let md = Modulus::new(f)?;
    let mp = minpoly_dense(&md, g)?;
    let n = md.degree();
    if mp.deg() == n {
        return Ok(mp);
    }
    let field = md.field();
    let g = md.reduce(g);
    let mut h = vec![vec![field.zero(); n]; n];
    let mut col = g;
    for j in 0..n {
        for (i, row) in h.iter_mut().enumerate() {
            row[j] = col.coeff(i);
        }
        col = md.mulmod(&col, &Poly::x(field));
    }
    Ok(hessenberg_charpoly(field, h))
}

/// Characteristic polynomial of a square matrix: similarity reduction to
/// upper Hessenberg form, then the three-term recurrence on leading minors.
fn hessenberg_charpoly<P: PrimeField>(field: &Field<P>, mut h: Vec<Vec<Fe<P>>>) -> Poly<P> {
    let n = h.len();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !field.is_zero(&h[i][m - 1])) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let t = field.inv(&h[m][m - 1]).expect("pivot is nonzero");
        for i in m + 1..n {
            let u = field.mul(&h[i][m - 1], &t);
            if field.is_zero(&u) {
                continue;
            }
            for j in 0..n {
                let v = field.mul(&u, &h[m][j]);
                field.sub_assign(&mut h[i][j], &v);
            }
            for row in h.iter_mut() {
                let v = field.mul(&u, &row[i]);
                field.add_assign(&mut row[m], &v);
            }
        }
    }
    let mut p = vec![Poly::one(field)];
    for m in 1..=n {
        let mut next = Poly::linear(field, &h[m - 1][m - 1]).mul(&p[m - 1]);
        let mut prod = field.one();
        for i in (1..m).rev() {
            prod = field.mul(&prod, &h[i][i - 1]);
            let c = field.mul(&h[i - 1][m - 1], &prod);
            next = next.sub(&p[i - 1].scale(&c));
        }
        p.push(next);
    }
    p.pop().expect("at least the constant polynomial")
}
