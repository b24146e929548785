//! Rational fractions `num / den` in lowest terms with monic denominator.

use super::Poly;
use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFraction<P: PrimeField> {
    num: Poly<P>,
    den: Poly<P>,
}

impl<P: PrimeField> RationalFraction<P> {
    pub fn new(num: Poly<P>, den: Poly<P>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.deg() > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        let lead = den.lead();
        if !den.field().is_one(&lead) {
            let inv = den.field().inv(&lead)?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFraction { num, den })
    }

    pub fn from_poly(p: Poly<P>) -> Self {
        let den = Poly::one(p.field());
        RationalFraction { num: p, den }
    }

    pub fn identity(field: &Field<P>) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn num(&self) -> &Poly<P> {
        &self.num
    }

    pub fn den(&self) -> &Poly<P> {
        &self.den
    }

    pub fn field(&self) -> &Field<P> {
        self.num.field()
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.deg())
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &[P::Residue]) -> Option<Fe<P>> {
        let f = self.field();
        let d = self.den.eval(x);
        if f.is_zero(&d) {
            return None;
        }
        Some(f.mul(&self.num.eval(x), &f.inv(&d).ok()?))
    }

    /// `self ∘ g`, in lowest terms.
    pub fn compose(&self, g: &RationalFraction<P>) -> Result<Self> {
        let f = self.field();
        if g.degree() == 0 {
            let c = g.eval(&f.zero()).ok_or(Error::UndefinedComposition)?;
            let v = self.eval(&c).ok_or(Error::UndefinedComposition)?;
            return Ok(Self::from_poly(Poly::constant(f, &v)));
        }
        // homogenize: sum_i a_i u^i v^(n-i) with n = degree(self)
        let n = self.degree();
        let mut upow = vec![Poly::one(f)];
        let mut vpow = vec![Poly::one(f)];
        for i in 1..=n {
            upow.push(upow[i - 1].mul(&g.num));
            vpow.push(vpow[i - 1].mul(&g.den));
        }
        let homog = |p: &Poly<P>| {
            let mut acc = Poly::zero(f);
            for (i, c) in p.coeffs().iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                acc = acc.add(&upow[i].mul(&vpow[n - i]).scale(c));
            }
            acc
        };
        let num = homog(&self.num);
        let den = homog(&self.den);
        if den.is_zero() {
            return Err(Error::UndefinedComposition);
        }
        Self::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fp64;

    fn fp(p: u64) -> Field<Fp64> {
        Field::prime(Fp64::new(p).unwrap())
    }

    #[test]
    fn iterate_char2_fraction() {
        let f2 = fp(2);
        let i = RationalFraction::new(Poly::from_i64s(&f2, &[1, 0, 1]), Poly::x(&f2)).unwrap();
        let ii = i.compose(&i).unwrap();
        assert_eq!(ii.num(), &Poly::from_i64s(&f2, &[1, 0, 1, 0, 1]));
        assert_eq!(ii.den(), &Poly::from_i64s(&f2, &[0, 1, 0, 1]));
    }

    #[test]
    fn identity_and_pointwise() {
        let f3 = fp(3);
        let g = RationalFraction::new(Poly::from_i64s(&f3, &[1, 1]), Poly::x(&f3)).unwrap();
        assert_eq!(RationalFraction::identity(&f3).compose(&g).unwrap(), g);
        let gg = g.compose(&g).unwrap();
        let expect =
            RationalFraction::new(Poly::from_i64s(&f3, &[1, 2]), Poly::from_i64s(&f3, &[1, 1]))
                .unwrap();
        assert_eq!(gg, expect);
        let f101 = fp(101);
        let h = RationalFraction::new(
            Poly::from_i64s(&f101, &[3, 1, 4]),
            Poly::from_i64s(&f101, &[5, 0, 1]),
        )
        .unwrap();
        let k = RationalFraction::new(
            Poly::from_i64s(&f101, &[2, 7]),
            Poly::from_i64s(&f101, &[1, 1]),
        )
        .unwrap();
        let hk = h.compose(&k).unwrap();
        let mut checked = 0;
        for x in 0..101 {
            let xv = f101.from_u64(x);
            if let Some(kx) = k.eval(&xv) {
                if let Some(v) = h.eval(&kx) {
                    assert_eq!(hk.eval(&xv), Some(v));
                    checked += 1;
                }
            }
        }
        assert!(checked >= 20);
    }

    #[test]
    fn pole_at_constant() {
        let f5 = fp(5);
        let inv = RationalFraction::new(Poly::one(&f5), Poly::x(&f5)).unwrap();
        let zero = RationalFraction::from_poly(Poly::zero(&f5));
        assert_eq!(inv.compose(&zero).unwrap_err(), Error::UndefinedComposition);
    }

    mod props {
        use super::*;
        use crate::arith::RngHandle;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn composition_agrees_pointwise(seed in any::<u64>(), dh in 1usize..5, dk in 1usize..4) {
                let k = fp(101);
                let mut rng = RngHandle::new(seed, 4);
                let frac = |rng: &mut RngHandle, d: usize| {
                    RationalFraction::new(Poly::random_monic(&k, d, rng), Poly::random_monic(&k, d - 1, rng)).unwrap()
                };
                let h = frac(&mut rng, dh);
                let g = frac(&mut rng, dk);
                let hg = match h.compose(&g) {
                    Ok(c) => c,
                    Err(_) => return Ok(()),
                };
                let mut checked = 0;
                for x in 0..101 {
                    let xv = k.from_u64(x);
                    if let Some(v) = g.eval(&xv).and_then(|gx| h.eval(&gx)) {
                        prop_assert_eq!(hg.eval(&xv), Some(v));
                        checked += 1;
                    }
                }
                prop_assert!(checked >= 20);
            }
        }
    }
}
