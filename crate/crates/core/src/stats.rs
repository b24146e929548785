//! Monte-Carlo estimates of two densities: irreducible monic polynomials
//! of degree `d`, and Weierstrass curves with a rational point of order `ℓ`.

use crate::arith::{PrimeField, RngHandle};
use crate::classic::ben_or_test;
use crate::ec::count::{curve_order, field_size};
use crate::ec::Curve;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

pub const MIN_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub samples: usize,
    pub hits: usize,
    pub fraction: f64,
    /// Wilson 99.7% interval.
    pub ci: (f64, f64),
    /// Claimed lower bound `1/(2d)`.
    pub bound: f64,
    pub pass: bool,
}

fn wilson(hits: usize, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = hits as f64 / n;
    let den = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Fraction of uniformly random monic degree-`d` polynomials that pass
/// the irreducibility test.
pub fn irreducible_density<P: PrimeField>(
    k: &Field<P>,
    d: usize,
    samples: usize,
    rng: &mut RngHandle,
) -> Result<DensityReport> {
    if samples < MIN_SAMPLES || d == 0 {
        return Err(Error::InvalidInput(format!(
            "need d ≥ 1 and at least {MIN_SAMPLES} samples"
        )));
    }
    let hits = (0..samples)
        .filter(|_| ben_or_test(&Poly::random_monic(k, d, rng)))
        .count();
    let fraction = hits as f64 / samples as f64;
    let bound = 1.0 / (2.0 * d as f64);
    Ok(DensityReport {
        samples,
        hits,
        fraction,
        ci: wilson(hits, samples, 3.0),
        bound,
        pass: fraction >= bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionReport {
    pub samples: usize,
    pub hits: usize,
    pub fraction: f64,
    /// `1/(ℓ-1)`.
    pub expected: f64,
    /// `4ℓ(ℓ+1)/((ℓ-1)√q)`.
    pub error_bound: f64,
    /// Three binomial standard deviations at the expected density.
    pub sampling: f64,
    pub pass: bool,
}

impl TorsionReport {
    pub fn band(&self) -> (f64, f64) {
        let w = self.error_bound + self.sampling;
        (self.expected - w, self.expected + w)
    }
}

/// Fraction of random Weierstrass curves over `k` whose group order is
/// divisible by `ell`.
pub fn torsion_density<P: PrimeField>(
    k: &Field<P>,
    ell: u64,
    samples: usize,
    rng: &mut RngHandle,
) -> Result<TorsionReport> {
    let q = field_size(k)?;
    if ell < 2 || (q - 1) % ell == 0 {
        return Err(Error::InvalidInput(format!(
            "{ell} must be a prime not dividing q - 1"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let mut hits = 0;
    for _ in 0..samples {
        let e = Curve::random(k, rng);
        if curve_order(&e)? % ell == 0 {
            hits += 1;
        }
    }
    let l = ell as f64;
    let expected = 1.0 / (l - 1.0);
    let error_bound = 4.0 * l * (l + 1.0) / ((l - 1.0) * (q as f64).sqrt());
    let sampling = 3.0 * (expected * (1.0 - expected) / samples as f64).sqrt();
    let fraction = hits as f64 / samples as f64;
    let pass = (fraction - expected).abs() <= error_bound + sampling;
    Ok(TorsionReport {
        samples,
        hits,
        fraction,
        expected,
        error_bound,
        sampling,
        pass,
    })
}
