//! Vélu isogenies of odd prime degree, their composition along the
//! chain `E = E_0 → E_1 → ... → E_δ`, and the fiber polynomial above a
//! rational point of the last curve.

use num_bigint::BigUint;

use super::count::{sylow_point, torsion_point};
use super::{CmData, Curve, Point};
use crate::arith::{PrimeField, RngHandle};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::{Poly, RationalFraction};

/// `(x, y) ↦ (φ(x)/ψ(x)^2, (ω0(x) + y ω1(x))/ψ(x)^3)`.
#[derive(Clone, Debug)]
pub struct IsogenyMap<P: PrimeField> {
    pub source: Curve<P>,
    pub target: Curve<P>,
    pub kernel: Point<P>,
    pub degree: u64,
    pub psi: Poly<P>,
    pub phi: Poly<P>,
    pub omega0: Poly<P>,
    pub omega1: Poly<P>,
}

/// Quotient of `E` by the subgroup generated by `T` of odd prime order.
pub fn velu_isogeny<P: PrimeField>(e: &Curve<P>, t: &Point<P>) -> Result<IsogenyMap<P>> {
    let k = e.field();
    if t.is_infinity() || !e.contains(t) {
        return Err(Error::BadKernel);
    }
    // order of T: smallest m with mT = O, which must be an odd prime
    let mut multiples = vec![t.clone()];
    loop {
        let next = e.add(multiples.last().expect("nonempty"), t);
        if next.is_infinity() {
            break;
        }
        multiples.push(next);
        if multiples.len() > 1 << 16 {
            return Err(Error::BadKernel);
        }
    }
    let ell = multiples.len() as u64 + 1;
    if ell % 2 == 0 || !crate::arith::primality::is_prime_u64(ell) {
        return Err(Error::BadKernel);
    }
    let [a1, a2, a3, a4, a6] = e.coefficients();
    let c = |v: i64| k.from_i64(v);
    let x = Poly::x(k);
    let one = Poly::one(k);
    let half = &multiples[..(ell as usize - 1) / 2];

    let mut psi = one.clone();
    for q in half {
        psi = psi.mul(&Poly::linear(k, q.x().expect("affine")));
    }
    let psi2 = psi.mul(&psi);
    let psi3 = psi2.mul(&psi);

    let mut v_sum = k.zero();
    let mut w_sum = k.zero();
    let mut phi = x.mul(&psi2);
    let mut omega1 = psi3.clone();
    let mut omega0 = Poly::zero(k);
    let h = Poly::from_coeffs(k, &[a3.clone(), a1.clone()]);
    for q in half {
        let (xq, yq) = (q.x().expect("affine"), q.y().expect("affine"));
        let gx = k.sub(
            &k.add(
                &k.add(&k.mul(&c(3), &k.sqr(xq)), &k.mul(&c(2), &k.mul(a2, xq))),
                a4,
            ),
            &k.mul(a1, yq),
        );
        let gy = k.sub(&k.sub(&k.neg(&k.mul(&c(2), yq)), &k.mul(a1, xq)), a3);
        let vq = k.sub(&k.mul(&c(2), &gx), &k.mul(a1, &gy));
        let uq = k.sqr(&gy);
        k.add_assign(&mut v_sum, &vq);
        k.add_assign(&mut w_sum, &k.add(&uq, &k.mul(xq, &vq)));

        let lin = Poly::linear(k, xq);
        let pq = psi.div_exact(&lin)?;
        let pq2 = pq.mul(&pq);
        let pq3 = pq2.mul(&pq);
        let pq2psi = pq2.mul(&psi);
        // x' = x + sum vq/(x - xq) + uq/(x - xq)^2
        phi = phi.add(&lin.scale(&vq).add(&Poly::constant(k, &uq)).mul(&pq2));
        // y' = y - sum [uq (2y + a1 x + a3)/(x-xq)^3 + vq (a1 (x-xq) + y - yq)/(x-xq)^2
        //              + (a1 uq - gx gy)/(x-xq)^2]
        omega1 = omega1
            .sub(&pq3.scale(&k.mul(&c(2), &uq)))
            .sub(&pq2psi.scale(&vq));
        let t3 = h.mul(&pq3).scale(&uq);
        let lin_part = lin.scale(&k.mul(a1, &vq)).add(&Poly::constant(
            k,
            &k.sub(&k.sub(&k.mul(a1, &uq), &k.mul(&gx, &gy)), &k.mul(&vq, yq)),
        ));
        omega0 = omega0.sub(&t3).sub(&lin_part.mul(&pq2psi));
    }
    let b2 = k.add(&k.sqr(a1), &k.mul(&c(4), a2));
    let a4p = k.sub(a4, &k.mul(&c(5), &v_sum));
    let a6p = k.sub(&k.sub(a6, &k.mul(&b2, &v_sum)), &k.mul(&c(7), &w_sum));
    let target = Curve::new(k, a1.clone(), a2.clone(), a3.clone(), a4p, a6p)?;
    Ok(IsogenyMap {
        source: e.clone(),
        target,
        kernel: t.clone(),
        degree: ell,
        psi,
        phi,
        omega0,
        omega1,
    })
}

impl<P: PrimeField> IsogenyMap<P> {
    /// `x' = φ/ψ^2` as a reduced fraction.
    pub fn x_map(&self) -> Result<RationalFraction<P>> {
        RationalFraction::new(self.phi.clone(), self.psi.mul(&self.psi))
    }

    pub fn eval(&self, p: &Point<P>) -> Point<P> {
        let k = self.source.field();
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let s = self.psi.eval(x);
                if k.is_zero(&s) {
                    return Point::Infinity;
                }
                let s2 = k.sqr(&s);
                let s3 = k.mul(&s2, &s);
                let xp = k.div(&self.phi.eval(x), &s2).expect("nonzero");
                let num = k.add(&self.omega0.eval(x), &k.mul(y, &self.omega1.eval(x)));
                let yp = k.div(&num, &s3).expect("nonzero");
                Point::Affine(xp, yp)
            }
        }
    }
}

/// `I = J_m ∘ ... ∘ J_1` for a chain of maps.
pub fn isogeny_compose<P: PrimeField>(maps: &[IsogenyMap<P>]) -> Result<RationalFraction<P>> {
    let first = maps.first().ok_or(Error::ChainMismatch)?;
    let mut acc = first.x_map()?;
    for w in maps.windows(2) {
        if w[0].target != w[1].source {
            return Err(Error::ChainMismatch);
        }
        acc = w[1].x_map()?.compose(&acc)?;
    }
    Ok(acc)
}

/// The isogenies `E_m → E_(m+1)` with kernels the rational `ℓ`-torsion,
/// and the eigenvalue data at precision `e + δ`.
#[derive(Clone, Debug)]
pub struct Chain<P: PrimeField> {
    pub maps: Vec<IsogenyMap<P>>,
    pub cm: CmData,
    /// `#E(K)`, shared by every curve in the chain.
    pub order: u64,
}

impl<P: PrimeField> Chain<P> {
    pub fn source(&self) -> &Curve<P> {
        &self.maps[0].source
    }

    pub fn target(&self) -> &Curve<P> {
        &self.maps.last().expect("nonempty chain").target
    }

    pub fn x_map(&self) -> Result<RationalFraction<P>> {
        isogeny_compose(&self.maps)
    }
}

pub fn cm_chain<P: PrimeField>(
    e: &Curve<P>,
    n: u64,
    ell: u64,
    delta: u32,
    rng: &mut RngHandle,
) -> Result<Chain<P>> {
    let q = crate::ec::count::field_size(e.field())?;
    let cm = CmData::new(q, n, ell, delta)?;
    let mut maps = Vec::with_capacity(delta as usize);
    let mut cur = e.clone();
    for _ in 0..delta {
        let t = torsion_point(&cur, n, ell, rng)?;
        let map = velu_isogeny(&cur, &t)?;
        cur = map.target.clone();
        maps.push(map);
    }
    Ok(Chain { maps, cm, order: n })
}

/// `φ(x) - x'(A) ψ(x)^2` for the composed isogeny.
pub fn fiber_polynomial<P: PrimeField>(chain: &Chain<P>, a: &Point<P>) -> Result<Poly<P>> {
    let target = chain.target();
    if !target.contains(a) {
        return Err(Error::BadPoint("A is not on the target curve".into()));
    }
    if target.double(a).is_infinity() {
        return Err(Error::BadPoint("2A = O".into()));
    }
    let xa = a.x().expect("affine");
    let i = chain.x_map()?;
    i.num().sub(&i.den().scale(xa)).monic()
}

/// Picks `A` generating the `ℓ`-Sylow subgroup of the last curve and
/// returns it with its fiber polynomial.
pub fn fiber_for_generator<P: PrimeField>(
    chain: &Chain<P>,
    rng: &mut RngHandle,
) -> Result<(Point<P>, Poly<P>)> {
    let (a, _) = sylow_point(chain.target(), chain.order, chain.cm.ell, rng)?;
    let f = fiber_polynomial(chain, &a)?;
    Ok((a, f))
}

fn eval_embedded<P: PrimeField>(
    m: &Field<P>,
    sub: &Field<P>,
    f: &Poly<P>,
    x: &[P::Residue],
) -> Result<Fe<P>> {
    let mut acc = m.zero();
    for c in f.coeffs().iter().rev() {
        acc = m.mul(&acc, x);
        m.add_assign(&mut acc, &m.embed(sub, c)?);
    }
    Ok(acc)
}

/// The point `B = (α, β)` over `M = K[x]/f` with `α` the class of `x`,
/// `β` obtained by pulling `y(A)` back along the chain one step at a
/// time; a square root is used if some `ω1` vanishes.
pub fn y_of_fiber<P: PrimeField>(
    chain: &Chain<P>,
    a: &Point<P>,
    f: &Poly<P>,
) -> Result<(Field<P>, Curve<P>, Point<P>)> {
    let k = chain.source().field();
    let m = Field::extension(k, f.monic()?.into_data())?;
    let alpha = m.generator();
    let em = chain.source().base_change(&m)?;
    let mut xs = vec![alpha.clone()];
    for map in &chain.maps[..chain.maps.len() - 1] {
        let prev = xs.last().expect("nonempty");
        let num = eval_embedded(&m, k, &map.phi, prev)?;
        let den = m.sqr(&eval_embedded(&m, k, &map.psi, prev)?);
        xs.push(m.div(&num, &den)?);
    }
    let mut y = m.embed(
        k,
        a.y()
            .ok_or_else(|| Error::BadPoint("A is infinite".into()))?,
    )?;
    let mut pulled = true;
    for (map, xv) in chain.maps.iter().zip(&xs).rev() {
        let s = eval_embedded(&m, k, &map.psi, xv)?;
        let w0 = eval_embedded(&m, k, &map.omega0, xv)?;
        let w1 = eval_embedded(&m, k, &map.omega1, xv)?;
        if m.is_zero(&w1) {
            pulled = false;
            break;
        }
        let s3 = m.mul(&m.sqr(&s), &s);
        y = m.div(&m.sub(&m.mul(&y, &s3), &w0), &w1)?;
    }
    let b = if pulled {
        Point::Affine(alpha, y)
    } else {
        em.lift_x(&alpha).ok_or(Error::NoRoot)?
    };
    if !em.contains(&b) {
        return Err(Error::Internal("pulled-back point is off the curve".into()));
    }
    Ok((m, em, b))
}

/// `x(λ B) = x(B)^q` over the field of `B`'s coordinates.
pub fn eigenvalue_holds<P: PrimeField>(
    e: &Curve<P>,
    b: &Point<P>,
    lambda: &BigUint,
    q: &BigUint,
) -> bool {
    let m = e.field();
    match (e.mul(lambda, b), b) {
        (Point::Affine(xl, _), Point::Affine(x, _)) => m.pow(x, q) == xl,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fp64;
    use crate::classic::ben_or_test;
    use crate::ec::count::{curve_order, find_curve_with_ell_torsion};

    fn fp(p: u64) -> Field<Fp64> {
        Field::prime(Fp64::new(p).unwrap())
    }

    fn example() -> (Field<Fp64>, Curve<Fp64>, Point<Fp64>) {
        let f7 = fp(7);
        let e = Curve::from_i64s(&f7, [0, 0, 0, 1, 4]).unwrap();
        let t = e.point(vec![6], vec![4]).unwrap();
        (f7, e, t)
    }

    #[test]
    fn velu_example() {
        let (f7, e, t) = example();
        let map = velu_isogeny(&e, &t).unwrap();
        assert_eq!(map.target, Curve::from_i64s(&f7, [0, 0, 0, 3, 4]).unwrap());
        let xm = map.x_map().unwrap();
        assert_eq!(xm.num(), &Poly::from_i64s(&f7, &[5, 4, 5, 2, 1, 1]));
        let den = Poly::from_i64s(&f7, &[3, 1])
            .pow(2)
            .mul(&Poly::from_i64s(&f7, &[1, 1]).pow(2));
        assert_eq!(xm.den(), &den);
    }

    #[test]
    fn fiber_example() {
        let (f7, e, t) = example();
        let map = velu_isogeny(&e, &t).unwrap();
        let chain = Chain {
            maps: vec![map],
            cm: CmData::new(7, 10, 5, 1).unwrap(),
            order: 10,
        };
        let a = chain.target().point(vec![1], vec![1]).unwrap();
        let f = fiber_polynomial(&chain, &a).unwrap();
        assert_eq!(f, Poly::from_i64s(&f7, &[3, 1, 4, 1, 0, 1]));
        assert!(ben_or_test(&f));
        let (m, em, b) = y_of_fiber(&chain, &a, &f).unwrap();
        assert!(em.contains(&b));
        let img = chain.maps[0].x_map().unwrap();
        let bx = b.x().unwrap();
        let val = m.div(
            &eval_embedded(&m, &f7, img.num(), bx).unwrap(),
            &eval_embedded(&m, &f7, img.den(), bx).unwrap(),
        );
        assert_eq!(val.unwrap(), m.one());
        assert!(em.mul(&chain.cm.modulus, &b).is_infinity());
        assert!(eigenvalue_holds(
            &em,
            &b,
            &chain.cm.lambda,
            &BigUint::from(7u32)
        ));
    }

    fn check_homomorphism(map: &IsogenyMap<Fp64>, rng: &mut RngHandle, pairs: usize) {
        let e = &map.source;
        let e2 = &map.target;
        let k = e.field();
        for _ in 0..pairs {
            let p = e.random_point(rng);
            let q = e.random_point(rng);
            let ip = map.eval(&p);
            let iq = map.eval(&q);
            assert!(e2.contains(&ip) && e2.contains(&iq));
            assert_eq!(map.eval(&e.add(&p, &q)), e2.add(&ip, &iq));
        }
        // ψ vanishes exactly on the kernel abscissae (checked on the whole field)
        let order = k.order_u128().unwrap();
        if order <= 1 << 12 {
            let roots: Vec<Fe<Fp64>> = (0..order)
                .map(|i| k.from_index(&BigUint::from(i)))
                .filter(|x| k.is_zero(&map.psi.eval(x)))
                .collect();
            let mut kernel_x = Vec::new();
            let t = &map.kernel;
            let mut cur = t.clone();
            while !cur.is_infinity() {
                kernel_x.push(cur.x().unwrap().clone());
                cur = e.add(&cur, t);
            }
            for r in &roots {
                assert!(kernel_x.contains(r));
            }
            for x in &kernel_x {
                assert!(roots.contains(x));
            }
        }
    }

    #[test]
    fn homomorphism_and_kernel() {
        let (_, e, t) = example();
        let mut rng = RngHandle::new(5, 5);
        check_homomorphism(&velu_isogeny(&e, &t).unwrap(), &mut rng, 25);
        for (p, ell) in [(13u64, 7u64), (11, 3), (101, 7), (2, 3), (3, 7)] {
            let k = if p < 5 {
                let fpp = fp(p);
                let m = crate::classic::first_irreducible(&fpp, 3);
                Field::extension(&fpp, m.into_data()).unwrap()
            } else {
                fp(p)
            };
            if let Ok((e, n)) = find_curve_with_ell_torsion(&k, ell, &mut rng, 2000) {
                let t = torsion_point(&e, n, ell, &mut rng).unwrap();
                let map = velu_isogeny(&e, &t).unwrap();
                check_homomorphism(&map, &mut rng, 25);
                assert_eq!(curve_order(&map.target).unwrap(), n);
            } else {
                panic!("no curve for p={p}, ell={ell}");
            }
        }
    }

    #[test]
    fn general_form_char2_and_char3() {
        let mut rng = RngHandle::new(12, 0);
        for (p, deg, ell) in [(2u64, 4usize, 7u64), (3, 3, 7), (2, 5, 3)] {
            let fpp = fp(p);
            let k = Field::extension(
                &fpp,
                crate::classic::first_irreducible(&fpp, deg).into_data(),
            )
            .unwrap();
            let (e, n) = find_curve_with_ell_torsion(&k, ell, &mut rng, 5000).unwrap();
            let t = torsion_point(&e, n, ell, &mut rng).unwrap();
            check_homomorphism(&velu_isogeny(&e, &t).unwrap(), &mut rng, 25);
        }
    }

    #[test]
    fn bad_kernel() {
        let (_, e, _) = example();
        assert_eq!(
            velu_isogeny(&e, &Point::Infinity).unwrap_err(),
            Error::BadKernel
        );
    }

    #[test]
    fn chain_of_two_and_fiber() {
        let mut rng = RngHandle::new(21, 0);
        let k = fp(101);
        let (e, n) = find_curve_with_ell_torsion(&k, 7, &mut rng, 2000).unwrap();
        let chain = cm_chain(&e, n, 7, 2, &mut rng).unwrap();
        let i = chain.x_map().unwrap();
        assert_eq!(i.degree(), 49);
        // denominator is a square
        let d = i.den();
        let g = d.gcd(&d.derivative());
        assert_eq!(g.deg(), 24);
        // composition agrees with step-by-step images
        for _ in 0..10 {
            let p = e.random_point(&mut rng);
            let step = chain.maps[1].eval(&chain.maps[0].eval(&p));
            if let (Some(x), Some(xs)) = (p.x(), step.x()) {
                assert_eq!(i.eval(x).unwrap(), *xs);
            }
        }
        let (a, f) = fiber_for_generator(&chain, &mut rng).unwrap();
        assert_eq!(f.deg(), 49);
        assert!(ben_or_test(&f));
        let (_, em, b) = y_of_fiber(&chain, &a, &f).unwrap();
        assert!(em.contains(&b));
        assert!(em.mul(&chain.cm.modulus, &b).is_infinity());
        assert!(eigenvalue_holds(
            &em,
            &b,
            &chain.cm.lambda,
            &BigUint::from(101u32)
        ));
    }

    mod props {
        use super::*;
        use crate::ec::count::torsion_point;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn velu_maps_are_homomorphisms(case in prop::sample::select(vec![
                                               (13u64, 1usize, 7u64), (101, 1, 7), (1013, 1, 3), (2, 4, 7), (3, 3, 7), (2, 5, 3)]),
                                           seed in any::<u64>()) {
                let (p, w, ell) = case;
                let fpp = fp(p);
                let k = if w == 1 { fpp } else {
                    Field::extension(&fpp, crate::classic::first_irreducible(&fpp, w).into_data()).unwrap()
                };
                let mut rng = RngHandle::new(seed, 0);
                let (e, n) = find_curve_with_ell_torsion(&k, ell, &mut rng, 5000).unwrap();
                let t = torsion_point(&e, n, ell, &mut rng).unwrap();
                let map = velu_isogeny(&e, &t).unwrap();
                check_homomorphism(&map, &mut rng, 25);
                prop_assert_eq!(curve_order(&map.target).unwrap(), n);
            }
        }
    }
}
