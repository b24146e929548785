//! Explicit models of `L = K[y]/g(y)` and of the same field presented as
//! `L̃ = F_p[u]/h(u)`, with the `F_p`-linear isomorphism `κ : L̃ → L`.

use num_bigint::BigUint;

use crate::arith::{PrimeField, RngHandle};
use crate::classic::{Candidates, Choice};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::Matrix;
use crate::poly::{minpoly_over, Poly};

/// `K ⊂ L` together with `L̃` and the matrices of `κ` and `κ⁻¹`.
#[derive(Clone, Debug)]
pub struct TowerModel<P: PrimeField> {
    k: Field<P>,
    l: Field<P>,
    lt: Field<P>,
    tau: Fe<P>,
    kappa: Matrix<P>,
    kappa_inv: Matrix<P>,
}

/// Finds `τ` generating `L` over the prime field and its minimal
/// polynomial `h̃`, of degree `[L : F_p]`.
pub fn find_generator<P: PrimeField>(
    l: &Field<P>,
    choice: &mut Choice<'_>,
) -> Result<(Fe<P>, Poly<P>)> {
    let fp = l.prime_field();
    let m = l.degree();
    if m == 1 {
        let tau = l.one();
        return Ok((tau.clone(), Poly::linear(&fp, &tau)));
    }
    let mut cands = Candidates::new(l, choice);
    loop {
        let tau = cands.next_nonzero()?;
        let h = minpoly_over(l, &tau, &fp)?;
        if h.deg() == m {
            return Ok((tau, h));
        }
    }
}

impl<P: PrimeField> TowerModel<P> {
    /// Builds `L = K[y]/g` (or `L = K` when `g` is absent) and its
    /// monogenic model.
    pub fn build(k: &Field<P>, g: Option<&Poly<P>>, choice: &mut Choice<'_>) -> Result<Self> {
        let l = match g {
            Some(g) => {
                if g.field() != k || !g.is_monic() {
                    return Err(Error::PreconditionViolated("g must be monic over K".into()));
                }
                Field::extension(k, g.data().to_vec())?
            }
            None => k.clone(),
        };
        let (tau, h) = find_generator(&l, choice)?;
        let fp = l.prime_field();
        let m = l.degree();
        let lt = if m == 1 {
            fp.clone()
        } else {
            Field::extension(&fp, h.into_data())?
        };
        let mut kappa = Matrix::zeros(&fp, m, m);
        let mut pw = l.one();
        for col in 0..m {
            for (row, c) in pw.iter().enumerate() {
                kappa.set(row, col, std::slice::from_ref(c));
            }
            pw = l.mul(&pw, &tau);
        }
        let kappa_inv = kappa.inverse()?;
        Ok(TowerModel {
            k: k.clone(),
            l,
            lt,
            tau,
            kappa,
            kappa_inv,
        })
    }

    /// Builds `L = K[y]/g` for a random irreducible `g` of degree `n`.
    pub fn with_degree(k: &Field<P>, n: usize, rng: &mut RngHandle) -> Result<Self> {
        if n == 1 {
            return Self::build(k, None, &mut Choice::Seeded(rng));
        }
        let g = crate::classic::random_irreducible(k, n, rng);
        Self::build(k, Some(&g), &mut Choice::Seeded(rng))
    }

    pub fn k(&self) -> &Field<P> {
        &self.k
    }

    pub fn l(&self) -> &Field<P> {
        &self.l
    }

    pub fn ltilde(&self) -> &Field<P> {
        &self.lt
    }

    pub fn tau(&self) -> &Fe<P> {
        &self.tau
    }

    pub fn kappa(&self) -> &Matrix<P> {
        &self.kappa
    }

    pub fn kappa_inv(&self) -> &Matrix<P> {
        &self.kappa_inv
    }

    /// `[L : K]`.
    pub fn n(&self) -> usize {
        self.l.degree() / self.k.degree()
    }

    pub fn apply_kappa(&self, v: &[P::Residue]) -> Result<Fe<P>> {
        if v.len() != self.lt.degree() {
            return Err(Error::WrongAlgebra);
        }
        Ok(self.kappa.apply_residues(v))
    }

    pub fn apply_kappa_inv(&self, v: &[P::Residue]) -> Result<Fe<P>> {
        if v.len() != self.l.degree() {
            return Err(Error::WrongAlgebra);
        }
        Ok(self.kappa_inv.apply_residues(v))
    }

    /// `κ` followed by projection onto `K`; errors unless the image lies
    /// in `K`.
    pub fn to_k(&self, v: &[P::Residue]) -> Result<Fe<P>> {
        let img = self.apply_kappa(v)?;
        let w = self.k.degree();
        if img[w..].iter().any(|c| *c != P::Residue::default()) {
            return Err(Error::CoefficientNotInSubfield);
        }
        Ok(img[..w].to_vec())
    }

    /// Embeds an element of `K` into `L̃` through `κ⁻¹`.
    pub fn from_k(&self, a: &[P::Residue]) -> Result<Fe<P>> {
        let v = self.l.embed(&self.k, a)?;
        self.apply_kappa_inv(&v)
    }

    /// Maps a polynomial over `L̃` with coefficients in `K̃` to `K`.
    pub fn descend_poly(&self, f: &Poly<P>) -> Result<Poly<P>> {
        if f.field() != &self.lt {
            return Err(Error::WrongAlgebra);
        }
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| self.to_k(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(&self.k, &coeffs))
    }

    /// Maps a polynomial over `K` into `L̃`.
    pub fn lift_poly(&self, f: &Poly<P>) -> Result<Poly<P>> {
        if f.field() != &self.k {
            return Err(Error::WrongAlgebra);
        }
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| self.from_k(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(&self.lt, &coeffs))
    }
}

/// `v^q = v`, i.e. `v` lies in the subfield with `q` elements.
pub fn is_in_subfield<P: PrimeField>(field: &Field<P>, v: &[P::Residue], q: &BigUint) -> bool {
    field.pow(v, q) == v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fp64;
    use crate::classic::ben_or_test;

    fn fp(p: u64) -> Field<Fp64> {
        Field::prime(Fp64::new(p).unwrap())
    }

    fn check_morphism(t: &TowerModel<Fp64>, rng: &mut RngHandle, trials: usize) {
        let lt = t.ltilde();
        let l = t.l();
        assert_eq!(t.apply_kappa(&lt.one()).unwrap(), l.one());
        assert!(t.kappa().mul(t.kappa_inv()).unwrap().is_identity());
        for _ in 0..trials {
            let a = lt.random(rng);
            let b = lt.random(rng);
            let lhs = t.apply_kappa(&lt.mul(&a, &b)).unwrap();
            let rhs = l.mul(&t.apply_kappa(&a).unwrap(), &t.apply_kappa(&b).unwrap());
            assert_eq!(lhs, rhs);
            assert_eq!(
                t.apply_kappa(&t.apply_kappa_inv(&l.random(rng)).unwrap())
                    .unwrap()
                    .len(),
                l.degree()
            );
            let v = l.random(rng);
            assert_eq!(t.apply_kappa(&t.apply_kappa_inv(&v).unwrap()).unwrap(), v);
        }
    }

    #[test]
    fn f4_generator() {
        let f2 = fp(2);
        let f4 = Field::extension(&f2, vec![1, 1, 1]).unwrap();
        let (tau, h) = find_generator(&f4, &mut Choice::Canonical).unwrap();
        assert_eq!(tau, vec![0, 1]);
        assert_eq!(h, Poly::from_i64s(&f2, &[1, 1, 1]));
    }

    #[test]
    fn prime_field_generator() {
        let f5 = fp(5);
        let (tau, h) = find_generator(&f5, &mut Choice::Canonical).unwrap();
        assert_eq!(h, Poly::linear(&f5, &tau));
    }

    #[test]
    fn already_monogenic() {
        let f5 = fp(5);
        let g = Poly::from_i64s(&f5, &[-2, 0, 1]);
        let mut rng = RngHandle::new(1, 1);
        let t = TowerModel::build(&f5, Some(&g), &mut Choice::Canonical).unwrap();
        // index order exhausts the prime scalars before reaching y
        assert_eq!(t.tau(), &vec![0, 1]);
        assert_eq!(t.ltilde().modulus().unwrap(), &[3, 0, 1]);
        assert!(t.kappa().is_identity());
        check_morphism(&t, &mut rng, 50);
    }

    #[test]
    fn f4_quadratic_tower() {
        let f2 = fp(2);
        let k = Field::extension(&f2, vec![1, 1, 1]).unwrap();
        let z = k.generator();
        let g = Poly::from_coeffs(&k, &[z, k.one(), k.one()]);
        assert!(ben_or_test(&g));
        let mut rng = RngHandle::new(4, 0);
        let t = TowerModel::build(&k, Some(&g), &mut Choice::Seeded(&mut rng)).unwrap();
        assert_eq!(t.ltilde().degree(), 4);
        assert!(ben_or_test(&Poly::from_flat(
            &f2,
            t.ltilde().modulus().unwrap().to_vec()
        )));
        check_morphism(&t, &mut rng, 100);
    }

    #[test]
    fn subfield_images_and_membership() {
        let f3 = fp(3);
        let k = Field::extension(&f3, vec![1, 2, 0, 1]).unwrap();
        let mut rng = RngHandle::new(9, 2);
        let t = TowerModel::with_degree(&k, 4, &mut rng).unwrap();
        check_morphism(&t, &mut rng, 100);
        let q = k.order().clone();
        for _ in 0..50 {
            let a = k.random(&mut rng);
            let v = t.from_k(&a).unwrap();
            assert!(is_in_subfield(t.ltilde(), &v, &q));
            assert_eq!(t.to_k(&v).unwrap(), a);
        }
        let u = t.ltilde().generator();
        assert!(!is_in_subfield(t.ltilde(), &u, &q));
        assert_eq!(t.to_k(&u).unwrap_err(), Error::CoefficientNotInSubfield);
    }

    #[test]
    fn membership_examples() {
        let f5 = fp(5);
        let l = Field::extension(&f5, vec![3, 0, 1]).unwrap();
        let five = BigUint::from(5u32);
        assert!(is_in_subfield(&l, &l.one(), &five));
        assert!(!is_in_subfield(&l, &l.generator(), &five));
        assert!(is_in_subfield(&l, &l.generator(), &BigUint::from(25u32)));
    }

    #[test]
    fn fixed_set_has_q_elements() {
        let f2 = fp(2);
        let k = Field::extension(&f2, vec![1, 1, 1]).unwrap();
        let mut rng = RngHandle::new(2, 2);
        let t = TowerModel::with_degree(&k, 3, &mut rng).unwrap();
        let lt = t.ltilde();
        let q = BigUint::from(4u32);
        let fixed = (0..64u32)
            .filter(|&i| is_in_subfield(lt, &lt.from_index(&BigUint::from(i)), &q))
            .count();
        assert_eq!(fixed, 4);
    }

    #[test]
    fn generator_density() {
        // F_{2^6} over F_2: elements of proper subfields number 2 + 4 + 8 - 2 = 12
        let f2 = fp(2);
        let k = Field::extension(&f2, vec![1, 1, 1]).unwrap();
        let mut rng = RngHandle::new(5, 0);
        let t = TowerModel::with_degree(&k, 3, &mut rng).unwrap();
        let l = t.l();
        let fpf = l.prime_field();
        let trials = 1000;
        let hits = (0..trials)
            .filter(|_| minpoly_over(l, &l.random(&mut rng), &fpf).unwrap().deg() == 6)
            .count();
        let frac = hits as f64 / trials as f64;
        assert!(frac >= 0.5 - 3.0 * (0.25f64 / trials as f64).sqrt());
    }

    mod props {
        use super::*;
        use crate::classic::first_irreducible;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn kappa_is_a_ring_isomorphism(p in prop::sample::select(vec![2u64, 3, 5, 13]),
                                           w in 1usize..4, n in 1usize..6, seed in any::<u64>()) {
                let fpp = fp(p);
                let k = if w == 1 { fpp.clone() } else { Field::extension(&fpp, first_irreducible(&fpp, w).into_data()).unwrap() };
                let mut rng = RngHandle::new(seed, 0);
                let t = TowerModel::with_degree(&k, n, &mut rng).unwrap();
                prop_assert_eq!(t.ltilde().degree(), n * w);
                check_morphism(&t, &mut rng, 20);
                let a = k.random(&mut rng);
                prop_assert_eq!(t.to_k(&t.from_k(&a).unwrap()).unwrap(), a);
            }
        }
    }
}
