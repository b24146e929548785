//! Irreducibility testing and the classical constructions for prime-power
//! degrees: Artin–Schreier towers (`ℓ = p`), radicial extensions
//! (`ℓ | q - 1`), the quadratic-twist variant for `ℓ = 2`, `q ≡ 3 mod 4`,
//! and Gauss periods for `ℓ = 3`, `q ≡ 2 mod 3`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{PrimeField, RngHandle};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::Matrix;
use crate::poly::modular::{minpoly_over, Modulus};
use crate::poly::{Poly, RationalFraction};

/// How the constructions pick their auxiliary elements.
pub enum Choice<'a> {
    /// Uniform draws from a seeded stream.
    Seeded(&'a mut RngHandle),
    /// Nonzero elements in increasing index order (`c0 + p·c1 + ...`).
    Canonical,
}

impl Choice<'_> {
    pub fn reborrow(&mut self) -> Choice<'_> {
        match self {
            Choice::Seeded(r) => Choice::Seeded(r),
            Choice::Canonical => Choice::Canonical,
        }
    }
}

/// Stateful candidate stream over the nonzero elements of a field.
pub struct Candidates<'c, 'a, P: PrimeField> {
    field: Field<P>,
    choice: &'c mut Choice<'a>,
    next: BigUint,
}

impl<'c, 'a, P: PrimeField> Candidates<'c, 'a, P> {
    pub fn new(field: &Field<P>, choice: &'c mut Choice<'a>) -> Self {
        Candidates {
            field: field.clone(),
            choice,
            next: BigUint::one(),
        }
    }

    pub fn next_nonzero(&mut self) -> Result<Fe<P>> {
        match self.choice {
            Choice::Seeded(rng) => Ok(self.field.random_nonzero(rng)),
            Choice::Canonical => {
                if &self.next >= self.field.order() {
                    return Err(Error::TrialsExhausted(
                        self.field.order().to_usize().unwrap_or(usize::MAX),
                    ));
                }
                let v = self.field.from_index(&self.next);
                self.next += 1u32;
                Ok(v)
            }
        }
    }
}

/// Ben-Or: `f` is irreducible iff `gcd(x^(q^i) - x, f) = 1` for all
/// `1 <= i <= deg f / 2`.
pub fn ben_or_test<P: PrimeField>(f: &Poly<P>) -> bool {
    let Some(n) = f.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    let f = f.monic().expect("nonzero polynomial");
    if n == 1 {
        return true;
    }
    let field = f.field().clone();
    let md = Modulus::new(&f).expect("monic");
    let x = md.reduce(&Poly::x(&field));
    let q = field.order();
    let xq = md.powmod(&x, q);
    let use_compose = (q.bits() as f64) > 2.0 * (n as f64).sqrt();
    let table = if use_compose {
        Some(md.composition_table(&xq, n))
    } else {
        None
    };
    let mut cur = xq.clone();
    for i in 1..=n / 2 {
        if i > 1 {
            cur = match &table {
                Some(t) => t.apply(&md, &cur),
                None => md.powmod(&cur, q),
            };
        }
        let g = cur.sub(&x).gcd(&f);
        if g.deg() > 0 {
            return false;
        }
    }
    true
}

/// `T_{l,k}(a) = a + a^(p^l) + ... + a^(p^((k/l - 1) l))`.
pub fn trace_map<P: PrimeField>(
    field: &Field<P>,
    a: &[P::Residue],
    l: usize,
    k: usize,
) -> Result<Fe<P>> {
    if l == 0 || k % l != 0 {
        return Err(Error::PreconditionViolated(format!(
            "{l} does not divide {k}"
        )));
    }
    let mut acc = a.to_vec();
    let mut cur = a.to_vec();
    for _ in 1..k / l {
        cur = field.frobenius(&cur, l);
        field.add_assign(&mut acc, &cur);
    }
    Ok(acc)
}

/// First monic irreducible of degree `d` over `k` in enumeration order:
/// the lower coefficients are the base-`|k|` digits of an increasing
/// index, each digit mapped to an element by [`Field::from_index`].
pub fn first_irreducible<P: PrimeField>(k: &Field<P>, d: usize) -> Poly<P> {
    let q = k.order().clone();
    let mut idx = BigUint::zero();
    loop {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut r = idx.clone();
        for _ in 0..d {
            let (quo, digit) = r.div_rem(&q);
            coeffs.push(k.from_index(&digit));
            r = quo;
        }
        coeffs.push(k.one());
        let f = Poly::from_coeffs(k, &coeffs);
        if ben_or_test(&f) {
            return f;
        }
        idx += 1u32;
    }
}

/// Monic irreducible of degree `d` by rejection sampling.
pub fn random_irreducible<P: PrimeField>(k: &Field<P>, d: usize, rng: &mut RngHandle) -> Poly<P> {
    loop {
        let f = Poly::random_monic(k, d, rng);
        if ben_or_test(&f) {
            return f;
        }
    }
}

/// The iterated fraction `I^(δ)` for `I(x) = (x^p - 1) / (x + ... + x^(p-1))`.
pub fn artin_schreier_fraction<P: PrimeField>(
    fp: &Field<P>,
    delta: u32,
) -> Result<RationalFraction<P>> {
    let p = fp.characteristic().to_usize().ok_or_else(|| {
        Error::InvalidInput("characteristic too large for an Artin-Schreier tower".into())
    })?;
    let mut num = vec![0i64; p + 1];
    num[0] = -1;
    num[p] = 1;
    let mut den = vec![1i64; p];
    den[0] = 0;
    let i = RationalFraction::new(Poly::from_i64s(fp, &num), Poly::from_i64s(fp, &den))?;
    let mut acc = i.clone();
    for _ in 1..delta {
        acc = i.compose(&acc)?;
    }
    Ok(acc)
}

/// Solves `s^p - s = c` over `k` as an `F_p`-linear system in the flat
/// basis, with free variables set to zero.
pub fn solve_artin_schreier<P: PrimeField>(k: &Field<P>, c: &[P::Residue]) -> Result<Fe<P>> {
    let fp = k.prime_field();
    let w = k.degree();
    let mut m = Matrix::zeros(&fp, w, w);
    for j in 0..w {
        let mut e = k.zero();
        e[j] = fp.p().one();
        let img = k.sub(&k.frobenius(&e, 1), &e);
        for (i, v) in img.iter().enumerate() {
            m.set(i, j, &[v.clone()]);
        }
    }
    let rhs: Vec<Fe<P>> = c.iter().map(|v| vec![v.clone()]).collect();
    let sol = m.solve(&rhs)?;
    Ok(sol.x.into_iter().map(|v| v[0].clone()).collect())
}

/// Element of `𝒜_{p^e}` inside `K`, `e = v_p(w)`, starting from `a = 1`.
pub fn artin_schreier_witness<P: PrimeField>(k: &Field<P>) -> Result<Fe<P>> {
    let p = k.characteristic().to_u64().unwrap_or(u64::MAX);
    let mut w = k.degree() as u64;
    let mut a = k.one();
    while p != u64::MAX && w % p == 0 {
        w /= p;
        let s = solve_artin_schreier(k, &k.inv(&a)?)?;
        a = k.sub(&k.one(), &k.inv(&s)?);
    }
    Ok(a)
}

/// Degree `p^δ` irreducible `N - a D` where `I^(δ) = N / D`.
pub fn artin_schreier_construct<P: PrimeField>(k: &Field<P>, delta: u32) -> Result<Poly<P>> {
    if delta == 0 {
        return Err(Error::PreconditionViolated("delta must be positive".into()));
    }
    let a = artin_schreier_witness(k)?;
    let fp = k.prime_field();
    let frac = artin_schreier_fraction(&fp, delta)?;
    let n = frac.num().embed(k)?;
    let d = frac.den().embed(k)?;
    n.sub(&d.scale(&a)).monic()
}

/// Generator of the `ℓ`-Sylow subgroup of `F*` for a field `F` with
/// `ℓ | |F| - 1`. Returns `(a, e)` with `a` of order exactly `ℓ^e`.
pub fn sylow_generator<P: PrimeField>(
    field: &Field<P>,
    ell: u64,
    choice: &mut Choice<'_>,
) -> Result<(Fe<P>, u32)> {
    let n = field.order() - 1u32;
    let l = BigUint::from(ell);
    if !(&n % &l).is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "{ell} does not divide q - 1"
        )));
    }
    let mut e = 0u32;
    let mut cof = n;
    while (&cof % &l).is_zero() {
        cof /= &l;
        e += 1;
    }
    let test_exp = l.pow(e - 1);
    let mut cands = Candidates::new(field, choice);
    loop {
        let c = cands.next_nonzero()?;
        let a = field.pow(&c, &cof);
        if !field.is_one(&field.pow(&a, &test_exp)) {
            return Ok((a, e));
        }
    }
}

/// `x^(ℓ^δ) - a` with `a` generating the `ℓ`-Sylow subgroup of `K*`.
pub fn kummer_construct<P: PrimeField>(
    k: &Field<P>,
    ell: u64,
    delta: u32,
    choice: &mut Choice<'_>,
) -> Result<Poly<P>> {
    let qm1 = k.order() - 1u32;
    if !(&qm1 % ell).is_zero() || (ell == 2 && !(&qm1 % 4u32).is_zero()) {
        return Err(Error::PreconditionViolated(format!(
            "Kummer route needs {ell} | q - 1 (and 4 | q - 1 for 2)"
        )));
    }
    let (a, _) = sylow_generator(k, ell, choice)?;
    let d = ell
        .checked_pow(delta)
        .ok_or_else(|| Error::InvalidInput("degree overflow".into()))? as usize;
    let mut data = Poly::monomial(k, d).into_data();
    let s = k.degree();
    data[..s].clone_from_slice(&k.neg(&a));
    Ok(Poly::from_flat(k, data))
}

/// A non-square of `K` (odd characteristic).
pub fn nonsquare<P: PrimeField>(k: &Field<P>, choice: &mut Choice<'_>) -> Result<Fe<P>> {
    let mut cands = Candidates::new(k, choice);
    loop {
        let c = cands.next_nonzero()?;
        if !k.is_square(&c) {
            return Ok(c);
        }
    }
}

/// Quadratic extension `K[c]/(c^2 - r)` with `r` a non-square.
pub fn quadratic_extension<P: PrimeField>(
    k: &Field<P>,
    choice: &mut Choice<'_>,
) -> Result<(Field<P>, Fe<P>)> {
    if k.characteristic() == &BigUint::from(2u32) {
        // y^2 + y + c with absolute trace of c equal to 1
        let mut cands = Candidates::new(k, choice);
        loop {
            let c = cands.next_nonzero()?;
            if k.p().is_zero(&k.abs_trace(&c)) {
                continue;
            }
            let mut m = c.clone();
            m.extend(k.one());
            m.extend(k.one());
            return Ok((Field::extension(k, m)?, c));
        }
    }
    let r = nonsquare(k, choice)?;
    let mut m = k.neg(&r);
    m.extend(k.zero());
    m.extend(k.one());
    Ok((Field::extension(k, m)?, r))
}

/// Degree `2^δ` irreducible for odd `q ≡ 3 mod 4`: `x^2 - r` for `δ = 1`,
/// otherwise `(x^(d/2) - a)(x^(d/2) - ā) = x^d - (a + ā) x^(d/2) + a ā`.
pub fn kummer2_special_construct<P: PrimeField>(
    k: &Field<P>,
    delta: u32,
    choice: &mut Choice<'_>,
) -> Result<Poly<P>> {
    let q = k.order();
    if k.characteristic() == &BigUint::from(2u32) || (q % 4u32) != BigUint::from(3u32) || delta == 0
    {
        return Err(Error::PreconditionViolated(
            "special case needs q ≡ 3 mod 4 and δ ≥ 1".into(),
        ));
    }
    let (l, r) = quadratic_extension(k, choice)?;
    if delta == 1 {
        return Ok(Poly::monomial(k, 2).sub(&Poly::constant(k, &r)));
    }
    let (a, _) = sylow_generator(&l, 2, choice)?;
    let abar = l.pow(&a, q);
    let tr = l.add(&a, &abar);
    let nm = l.mul(&a, &abar);
    let s = k.degree();
    if !l.is_zero(&tr[s..]) || !l.is_zero(&nm[s..]) {
        return Err(Error::Internal(
            "conjugate product left the base field".into(),
        ));
    }
    let d = 1usize << delta;
    let f = Poly::monomial(k, d)
        .sub(&Poly::monomial(k, d / 2).scale(&tr[..s]))
        .add(&Poly::constant(k, &nm[..s]));
    Ok(f)
}

/// Intermediate data of the Gauss-period construction, exposed for tests.
pub struct GaussPeriod<P: PrimeField> {
    pub l: Field<P>,
    pub r: Fe<P>,
    pub a: Fe<P>,
    pub k: usize,
    pub poly: Poly<P>,
}

/// Degree `3^δ` irreducible for `q ≡ 2 mod 3` by descent from
/// `L = F_{q^2}`: minimal polynomial over `K` of a symmetric function of
/// `b` and its `q^d`-conjugate, `b` a root of `x^d - a`.
pub fn gauss_period_construct<P: PrimeField>(
    k: &Field<P>,
    delta: u32,
    choice: &mut Choice<'_>,
) -> Result<GaussPeriod<P>> {
    let q = k.order().clone();
    if (&q % 3u32) != BigUint::from(2u32) || delta == 0 {
        return Err(Error::PreconditionViolated(
            "Gauss periods need q ≡ 2 mod 3 and δ ≥ 1".into(),
        ));
    }
    let (l, r) = quadratic_extension(k, choice)?;
    let (a, e) = sylow_generator(&l, 3, choice)?;
    let d = 3usize.pow(delta);
    let mut fmod = l.neg(&a);
    fmod.extend(vec![P::Residue::default(); (d - 1) * l.degree()]);
    fmod.extend(l.one());
    let m = Field::extension(&l, fmod)?;
    let b = m.generator();
    let modulus = BigUint::from(3u32).pow(e + delta);
    // Φ_q^j(b) = b^(q^j mod 3^(e+δ))
    let phi = |j: usize| -> Fe<P> { m.pow(&b, &q.modpow(&BigUint::from(j), &modulus)) };
    let sigma = |k: usize, shift: usize| -> Fe<P> {
        let u = phi(shift);
        let v = phi(shift + d);
        if k == 1 {
            m.add(&u, &v)
        } else {
            m.mul(&u, &v)
        }
    };
    let test_shift = 3usize.pow(delta - 1);
    for kk in 1..=2 {
        let s0 = sigma(kk, 0);
        if s0 != sigma(kk, test_shift) {
            let poly = minpoly_over(&m, &s0, k)?;
            if poly.deg() != d {
                return Err(Error::Internal(
                    "selected period has the wrong degree".into(),
                ));
            }
            return Ok(GaussPeriod {
                l,
                r,
                a,
                k: kk,
                poly,
            });
        }
    }
    Err(Error::NoGenerator)
}
