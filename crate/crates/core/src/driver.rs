//! The master algorithm: factor `d`, build one irreducible per prime
//! power, glue the pieces by composed sums.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::primality::factor_small;
use crate::arith::{PrimeField, RngHandle};
use crate::classic::{
    artin_schreier_construct, ben_or_test, first_irreducible, kummer2_special_construct,
    kummer_construct, Choice,
};
use crate::descent::{descent_construct, direct_construct};
use crate::ec::count::BSGS_BITS;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{composed_sum, Poly};

/// Curve trials for the route over `K` itself, per unit of `ℓ`.
pub const DIRECT_TRIALS_PER_ELL: usize = 8;

/// `d = ∏ ℓ_i^δ_i` with ascending primes.
pub fn factor_degree(d: u64) -> Vec<(u64, u32)> {
    factor_small(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ArtinSchreier,
    Kummer,
    Kummer2,
    /// Isogeny fiber over `K` itself.
    Isogeny,
    Descent,
    Gauss,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ArtinSchreier => "artin_schreier",
            Method::Kummer => "kummer",
            Method::Kummer2 => "kummer2",
            Method::Isogeny => "isogeny",
            Method::Descent => "descent",
            Method::Gauss => "gauss",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteStep {
    pub ell: u64,
    pub delta: u32,
    pub method: Method,
    /// Auxiliary degree `n` of a descent.
    pub aux_degree: Option<u64>,
    /// Outcome of the `α^Q = x(λB)` check of a descent.
    pub eigenvalue_ok: Option<bool>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct ConstructionReport<P: PrimeField> {
    pub polynomial: Poly<P>,
    pub route: Vec<RouteStep>,
    pub seed: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub verify: bool,
    /// Auxiliary elements in index order instead of seeded draws.
    pub canonical: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            verify: true,
            canonical: false,
        }
    }
}

/// Prime-power pieces already built for one field and one set of options.
#[derive(Debug)]
pub struct PieceCache<P: PrimeField> {
    field: Field<P>,
    options: Options,
    pieces: HashMap<(u64, u32), (Poly<P>, RouteStep)>,
}

impl<P: PrimeField> PieceCache<P> {
    pub fn new(field: &Field<P>, options: Options) -> Self {
        PieceCache {
            field: field.clone(),
            options,
            pieces: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = &RouteStep> {
        self.pieces.values().map(|(_, s)| s)
    }
}

/// `K = F_p[z]/h(z)`; `h` defaults to the first irreducible of degree `w`
/// in index order.
pub fn build_field<P: PrimeField>(
    pf: P,
    w: usize,
    modulus: Option<&[BigUint]>,
) -> Result<Field<P>> {
    if w == 0 {
        return Err(Error::InvalidInput("w must be positive".into()));
    }
    let fp = Field::prime(pf);
    let h = match modulus {
        None => {
            if w == 1 {
                return Ok(fp);
            }
            first_irreducible(&fp, w)
        }
        Some(coeffs) => {
            if coeffs.len() != w + 1 {
                return Err(Error::InvalidInput(format!(
                    "modulus needs {} coefficients",
                    w + 1
                )));
            }
            if coeffs.iter().any(|c| c >= fp.characteristic()) {
                return Err(Error::InvalidInput(
                    "modulus coefficients must lie in [0, p)".into(),
                ));
            }
            let data = coeffs.iter().map(|c| fp.p().from_biguint(c)).collect();
            let h = Poly::from_flat(&fp, data);
            if !h.is_monic() || h.deg() != w || !ben_or_test(&h) {
                return Err(Error::InvalidInput(
                    "modulus must be monic irreducible of degree w".into(),
                ));
            }
            if w == 1 {
                return Ok(fp);
            }
            h
        }
    };
    Field::extension(&fp, h.into_data())
}

fn piece_rng(seed: u64, ell: u64, delta: u32) -> RngHandle {
    RngHandle::new(seed, 0).child((ell << 8) | delta as u64)
}

/// Irreducible of degree `ℓ^δ` over `k`, with the route taken.
pub fn construct_prime_power<P: PrimeField>(
    k: &Field<P>,
    ell: u64,
    delta: u32,
    options: &Options,
) -> Result<(Poly<P>, RouteStep)> {
    let start = Instant::now();
    let q = k.order();
    let l = BigUint::from(ell);
    let qm1 = q - 1u32;
    let mut rng = piece_rng(options.seed, ell, delta);
    let mut choice = if options.canonical {
        Choice::Canonical
    } else {
        Choice::Seeded(&mut rng)
    };
    let is_as = k.characteristic() == &l;
    let is_kummer = (&qm1 % &l).bits() == 0 && (ell != 2 || (&qm1 % 4u32).bits() == 0);
    let is_kummer2 = ell == 2 && (q % 4u32) == BigUint::from(3u32);
    let is_elliptic = ell != 2 && !is_as && (&qm1 % &l).bits() != 0;
    assert_eq!(
        [is_as, is_kummer, is_kummer2, is_elliptic]
            .iter()
            .filter(|&&b| b)
            .count(),
        1,
        "dispatch guards must partition the prime powers"
    );
    let step = |method, aux_degree, eigenvalue_ok| RouteStep {
        ell,
        delta,
        method,
        aux_degree,
        eigenvalue_ok,
        elapsed: start.elapsed(),
    };
    if is_as {
        let f = artin_schreier_construct(k, delta)?;
        return Ok((f, step(Method::ArtinSchreier, None, None)));
    }
    if is_kummer {
        let f = kummer_construct(k, ell, delta, &mut choice)?;
        return Ok((f, step(Method::Kummer, None, None)));
    }
    if is_kummer2 {
        let f = kummer2_special_construct(k, delta, &mut choice)?;
        return Ok((f, step(Method::Kummer2, None, None)));
    }
    if q.bits() > BSGS_BITS {
        return Err(Error::FieldTooLarge(q.to_string()));
    }
    let trials = DIRECT_TRIALS_PER_ELL * ell as usize + 64;
    match direct_construct(k, ell, delta, &mut rng, trials) {
        Ok(f) => return Ok((f, step(Method::Isogeny, None, None))),
        Err(Error::TrialsExhausted(_)) => {}
        Err(e) => return Err(e),
    }
    let out = descent_construct(k, ell, delta, &mut rng)?;
    Ok((
        out.poly,
        step(Method::Descent, Some(out.n), Some(out.eigenvalue_ok)),
    ))
}

/// Degree `d` monic irreducible over `k`.
pub fn construct<P: PrimeField>(
    k: &Field<P>,
    d: u64,
    options: &Options,
) -> Result<ConstructionReport<P>> {
    construct_inner(k, d, options, None)
}

/// As [`construct`], reusing and filling `cache`.
pub fn construct_cached<P: PrimeField>(
    k: &Field<P>,
    d: u64,
    options: &Options,
    cache: &mut PieceCache<P>,
) -> Result<ConstructionReport<P>> {
    if &cache.field != k || &cache.options != options {
        return Err(Error::PreconditionViolated(
            "cache belongs to another field or option set".into(),
        ));
    }
    construct_inner(k, d, options, Some(cache))
}

fn construct_inner<P: PrimeField>(
    k: &Field<P>,
    d: u64,
    options: &Options,
    mut cache: Option<&mut PieceCache<P>>,
) -> Result<ConstructionReport<P>> {
    let start = Instant::now();
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let mut route = Vec::new();
    let mut acc = Poly::x(k);
    for (ell, delta) in factor_degree(d) {
        let cached = cache
            .as_ref()
            .and_then(|c| c.pieces.get(&(ell, delta)).cloned());
        let (piece, step) = match cached {
            Some(hit) => hit,
            None => {
                let built = construct_prime_power(k, ell, delta, options)?;
                if let Some(c) = cache.as_mut() {
                    c.pieces.insert((ell, delta), built.clone());
                }
                built
            }
        };
        acc = if route.is_empty() {
            piece
        } else {
            composed_sum(&acc, &piece)?
        };
        route.push(step);
    }
    if acc.deg().to_u64() != Some(d) || !acc.is_monic() {
        return Err(Error::Internal(
            "assembled polynomial has the wrong shape".into(),
        ));
    }
    if options.verify && !ben_or_test(&acc) {
        return Err(Error::VerificationFailed);
    }
    Ok(ConstructionReport {
        polynomial: acc,
        route,
        seed: options.seed,
        elapsed: start.elapsed(),
    })
}
