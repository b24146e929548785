//! Degree `ℓ^δ` irreducibles over `K` when `ℓ ∤ q(q-1)`: build an isogeny
//! fiber over an auxiliary extension `L̃` of degree `n`, then descend to
//! `K` through a symmetric function of Frobenius conjugates.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::arith::{PrimeField, RngHandle};
use crate::ec::count::find_curve_with_ell_torsion;
use crate::ec::isogeny::fiber_for_generator;
use crate::ec::{cm_chain, eigenvalue_holds, y_of_fiber, Chain, Curve, Point};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::modular::{CompositionTable, Modulus};
use crate::poly::{minpoly_over, Poly};
use crate::tower::{is_in_subfield, TowerModel};

pub const MAX_AUX_DEGREE: u64 = 64;

/// Curve trials per unit of `ℓ`, before giving up on a field.
pub const TRIALS_PER_ELL: usize = 64;

/// Smallest `n` coprime to `ℓ(ℓ-1)` with `(4ℓ)^4 ≤ q^n`.
pub fn choose_n(q: &BigUint, ell: u64) -> Result<u64> {
    let l = BigUint::from(ell);
    if (q % &l).bits() == 0 || ((q - 1u32) % &l).bits() == 0 {
        return Err(Error::PreconditionViolated(format!(
            "{ell} divides q(q - 1)"
        )));
    }
    let bound = BigUint::from(4 * ell).pow(4);
    let m = ell * (ell - 1);
    let mut pw = q.clone();
    for n in 1..=MAX_AUX_DEGREE {
        if pw >= bound && n.gcd(&m) == 1 {
            return Ok(n);
        }
        pw *= q;
    }
    Err(Error::PreconditionViolated(format!(
        "auxiliary degree exceeds {MAX_AUX_DEGREE}"
    )))
}

pub fn curve_trials(ell: u64) -> usize {
    TRIALS_PER_ELL * ell as usize + 256
}

/// Everything needed to compute conjugates of `α = x(B)`.
#[derive(Clone, Debug)]
pub struct DescentCtx<P: PrimeField> {
    pub tower: TowerModel<P>,
    pub n: u64,
    pub q: BigUint,
    pub big_q: BigUint,
    pub chain: Chain<P>,
    pub a: Point<P>,
    pub fiber: Poly<P>,
    /// `M = L̃[x]/F`.
    pub m: Field<P>,
    /// `E` over `M`.
    pub curve: Curve<P>,
    pub b: Point<P>,
}

impl<P: PrimeField> DescentCtx<P> {
    pub fn new(k: &Field<P>, ell: u64, delta: u32, rng: &mut RngHandle) -> Result<Self> {
        let n = choose_n(k.order(), ell)?;
        let tower = TowerModel::with_degree(k, n as usize, rng)?;
        let (e, order) = find_curve_with_ell_torsion(tower.ltilde(), ell, rng, curve_trials(ell))?;
        let chain = cm_chain(&e, order, ell, delta, rng)?;
        Self::from_chain(tower, chain, rng)
    }

    pub fn from_chain(tower: TowerModel<P>, chain: Chain<P>, rng: &mut RngHandle) -> Result<Self> {
        let (a, fiber) = fiber_for_generator(&chain, rng)?;
        Self::from_fiber(tower, chain, a, fiber)
    }

    pub fn from_fiber(
        tower: TowerModel<P>,
        chain: Chain<P>,
        a: Point<P>,
        fiber: Poly<P>,
    ) -> Result<Self> {
        if chain.source().field() != tower.ltilde() {
            return Err(Error::WrongAlgebra);
        }
        let n = tower.n() as u64;
        let d = chain.cm.ell.pow(chain.cm.delta);
        if n.gcd(&(chain.cm.ell * (chain.cm.ell - 1))) != 1 {
            return Err(Error::PreconditionViolated(
                "n must be coprime to ℓ(ℓ - 1)".into(),
            ));
        }
        if fiber.deg() as u64 != d {
            return Err(Error::Internal(
                "fiber polynomial has the wrong degree".into(),
            ));
        }
        let q = tower.k().order().clone();
        let big_q = tower.ltilde().order().clone();
        let (m, curve, b) = y_of_fiber(&chain, &a, &fiber)?;
        Ok(DescentCtx {
            tower,
            n,
            q,
            big_q,
            chain,
            a,
            fiber,
            m,
            curve,
            b,
        })
    }

    pub fn d(&self) -> u64 {
        self.chain.cm.ell.pow(self.chain.cm.delta)
    }

    pub fn alpha(&self) -> &Fe<P> {
        self.b.x().expect("affine")
    }

    pub fn beta(&self) -> &Fe<P> {
        self.b.y().expect("affine")
    }

    /// `Φ_q^l(α)` from `Φ_Q^s(α) = x(λ^s B)` followed by `r` q-th powers,
    /// where `l = r + ns`.
    pub fn conjugate_alpha(&self, l: u64) -> Fe<P> {
        let l = l % (self.d() * self.n);
        let (s, r) = l.div_rem(&self.n);
        let mut x = if s == 0 {
            self.alpha().clone()
        } else {
            let pt = self.curve.mul(&self.chain.cm.lambda_pow(s), &self.b);
            pt.x().expect("λ^s is a unit").clone()
        };
        for _ in 0..r {
            x = self.m.pow(&x, &self.q);
        }
        x
    }

    /// `Φ_q^(jd)(α)` for `0 ≤ j < n`, each obtained from the previous one
    /// by a twisted composition.
    pub fn conjugates(&self) -> Result<Vec<Fe<P>>> {
        let tw = self.twister(self.d())?;
        let mut out = vec![self.alpha().clone()];
        while (out.len() as u64) < self.n {
            let next = tw.apply(out.last().expect("nonempty"));
            out.push(next);
        }
        Ok(out)
    }

    /// The map `Φ_q^l` on `M`.
    pub fn twister(&self, l: u64) -> Result<Twister<P>> {
        let lt = self.tower.ltilde().clone();
        let md = Modulus::new(&self.fiber)?;
        let xi = Poly::from_flat(&lt, self.conjugate_alpha(l));
        let table = md.composition_table(&xi, self.d() as usize);
        let steps = self.tower.k().degree() * l as usize;
        Ok(Twister {
            lt,
            md,
            table,
            steps,
            len: self.m.degree(),
        })
    }

    /// `α^Q = x(λB)`.
    pub fn eigenvalue_holds(&self) -> bool {
        eigenvalue_holds(&self.curve, &self.b, &self.chain.cm.lambda, &self.big_q)
    }
}

/// `Φ_q^l` on `M = L̃[x]/F`: for `a = P(α)`, `Φ_q^l(a) = P^σ(Φ_q^l(α))`
/// where `σ` raises the coefficients of `P` to the `q^l`-th power.
#[derive(Clone, Debug)]
pub struct Twister<P: PrimeField> {
    lt: Field<P>,
    md: Modulus<P>,
    table: CompositionTable<P>,
    steps: usize,
    len: usize,
}

impl<P: PrimeField> Twister<P> {
    pub fn apply(&self, a: &[P::Residue]) -> Fe<P> {
        let s = self.lt.degree();
        let twisted: Vec<P::Residue> = a
            .chunks(s)
            .flat_map(|c| self.lt.frobenius(c, self.steps))
            .collect();
        let mut out = self
            .table
            .apply(&self.md, &Poly::from_flat(&self.lt, twisted))
            .into_data();
        out.resize(self.len, P::Residue::default());
        out
    }
}

/// `k`-th elementary symmetric function of `roots`.
pub fn elementary_symmetric<P: PrimeField>(m: &Field<P>, roots: &[Fe<P>], k: usize) -> Fe<P> {
    if k == 1 {
        return roots.iter().fold(m.zero(), |acc, r| m.add(&acc, r));
    }
    // e[j] after processing a prefix of the roots
    let mut e = vec![m.zero(); k + 1];
    e[0] = m.one();
    for (i, r) in roots.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            let t = m.mul(&e[j - 1], r);
            m.add_assign(&mut e[j], &t);
        }
    }
    e.swap_remove(k)
}

/// `Σ_1, ..., Σ_n` of `α, Φ_q^d(α), ..., Φ_q^((n-1)d)(α)`.
pub fn symmetric_functions<P: PrimeField>(ctx: &DescentCtx<P>) -> Result<Vec<Fe<P>>> {
    let conj = ctx.conjugates()?;
    Ok((1..=conj.len())
        .map(|k| elementary_symmetric(&ctx.m, &conj, k))
        .collect())
}

/// Smallest `k` with `Σ_k(Φ_q^(ℓ^(δ-1))(α)) ≠ Σ_k(α)`, with `Σ_k(α)`.
/// The left side is `Φ_q^(ℓ^(δ-1))` applied to `Σ_k(α)`.
pub fn select_k<P: PrimeField>(ctx: &DescentCtx<P>) -> Result<(usize, Fe<P>)> {
    let cm = &ctx.chain.cm;
    let shift = ctx.twister(cm.ell.pow(cm.delta - 1))?;
    let conj = ctx.conjugates()?;
    for k in 1..=conj.len() {
        let s = elementary_symmetric(&ctx.m, &conj, k);
        if shift.apply(&s) != s {
            return Ok((k, s));
        }
    }
    Err(Error::NoGenerator)
}

/// Minimal polynomial of `Σ_k(α)` over `L̃`, checked to lie over `K̃`,
/// mapped into `K[x]`.
pub fn descend_polynomial<P: PrimeField>(
    ctx: &DescentCtx<P>,
    sigma: &[P::Residue],
) -> Result<Poly<P>> {
    let lt = ctx.tower.ltilde();
    let mp = minpoly_over(&ctx.m, sigma, lt)?;
    if mp.deg() as u64 != ctx.d() {
        return Err(Error::Internal(format!(
            "minimal polynomial has degree {}, not {}",
            mp.deg(),
            ctx.d()
        )));
    }
    for c in mp.coeffs() {
        if !is_in_subfield(lt, &c, &ctx.q) {
            return Err(Error::CoefficientNotInSubfield);
        }
    }
    ctx.tower.descend_poly(&mp)
}

/// Result of one descent run.
#[derive(Clone, Debug)]
pub struct Descended<P: PrimeField> {
    pub poly: Poly<P>,
    pub n: u64,
    pub k: usize,
    pub eigenvalue_ok: bool,
}

pub fn descent_construct<P: PrimeField>(
    k: &Field<P>,
    ell: u64,
    delta: u32,
    rng: &mut RngHandle,
) -> Result<Descended<P>> {
    let ctx = DescentCtx::new(k, ell, delta, rng)?;
    let eigenvalue_ok = ctx.eigenvalue_holds();
    if !eigenvalue_ok {
        return Err(Error::Internal("Frobenius does not act as λ on B".into()));
    }
    let (kk, sigma) = select_k(&ctx)?;
    let poly = descend_polynomial(&ctx, &sigma)?;
    Ok(Descended {
        poly,
        n: ctx.n,
        k: kk,
        eigenvalue_ok,
    })
}

/// Fiber polynomial of a chain built over `K` itself, when a curve with
/// rational `ℓ`-torsion turns up within `trials` attempts.
pub fn direct_construct<P: PrimeField>(
    k: &Field<P>,
    ell: u64,
    delta: u32,
    rng: &mut RngHandle,
    trials: usize,
) -> Result<Poly<P>> {
    let (e, order) = find_curve_with_ell_torsion(k, ell, rng, trials)?;
    let chain = cm_chain(&e, order, ell, delta, rng)?;
    let (_, f) = fiber_for_generator(&chain, rng)?;
    Ok(f)
}

/// `q^(l)`-th power by repeated exponentiation, for tests and checks.
pub fn frobenius_power<P: PrimeField>(
    m: &Field<P>,
    a: &[P::Residue],
    q: &BigUint,
    l: u64,
) -> Fe<P> {
    let mut x = a.to_vec();
    for _ in 0..l {
        x = m.pow(&x, q);
    }
    x
}
