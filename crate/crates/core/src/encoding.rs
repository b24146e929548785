//! Text encoding of polynomials over `K = F_p[z]/h(z)`: coefficients from
//! low to high degree separated by `;`, each written as its coordinates
//! in `1, z, z^2, ...` separated by `,`.

use num_bigint::BigUint;

use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

pub fn encode_text<P: PrimeField>(f: &Poly<P>) -> String {
    let pf = f.field().p();
    f.coeffs()
        .iter()
        .map(|c| {
            c.iter()
                .map(|r| pf.to_biguint(r).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Decimal coordinates of each coefficient, low to high.
pub fn coordinates<P: PrimeField>(f: &Poly<P>) -> Vec<Vec<String>> {
    let pf = f.field().p();
    f.coeffs()
        .iter()
        .map(|c| c.iter().map(|r| pf.to_biguint(r).to_string()).collect())
        .collect()
}

pub fn decode_text<P: PrimeField>(k: &Field<P>, s: &str) -> Result<Poly<P>> {
    let w = k.degree();
    let pf = k.p();
    let mut data = Vec::new();
    for (i, coeff) in s.trim().split(';').enumerate() {
        let parts: Vec<&str> = coeff.split(',').map(str::trim).collect();
        if parts.len() != w {
            return Err(Error::InvalidInput(format!(
                "coefficient {i} has {} coordinates, expected {w}",
                parts.len()
            )));
        }
        for part in parts {
            let v: BigUint = part.parse().map_err(|_| {
                Error::InvalidInput(format!("'{part}' is not a nonnegative integer"))
            })?;
            if &v >= k.characteristic() {
                return Err(Error::InvalidInput(format!("{v} is not reduced modulo p")));
            }
            data.push(pf.from_biguint(&v));
        }
    }
    Ok(Poly::from_flat(k, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, FpBig, RngHandle};

    #[test]
    fn f4_example() {
        let f2 = Field::prime(Fp64::new(2).unwrap());
        let f4 = Field::extension(&f2, vec![1, 1, 1]).unwrap();
        let z = f4.generator();
        let one = f4.one();
        let f = Poly::from_coeffs(&f4, &[one.clone(), z.clone(), one.clone(), z, one]);
        let s = encode_text(&f);
        assert_eq!(s, "1,0;0,1;1,0;0,1;1,0");
        assert_eq!(decode_text(&f4, &s).unwrap(), f);
    }

    #[test]
    fn round_trips() {
        let mut rng = RngHandle::new(3, 3);
        let f7 = Field::prime(Fp64::new(7).unwrap());
        let k = Field::extension(&f7, vec![4, 0, 1, 1]).unwrap();
        for d in [1, 5, 17] {
            let f = Poly::random_monic(&k, d, &mut rng);
            assert_eq!(decode_text(&k, &encode_text(&f)).unwrap(), f);
        }
        let big = Field::prime(
            FpBig::new("170141183460469231731687303715884105727".parse().unwrap()).unwrap(),
        );
        let f = Poly::random_monic(&big, 4, &mut rng);
        assert_eq!(decode_text(&big, &encode_text(&f)).unwrap(), f);
        assert_eq!(encode_text(&Poly::from_i64s(&f7, &[-2, 0, 1])), "5;0;1");
    }

    #[test]
    fn rejects_malformed() {
        let f2 = Field::prime(Fp64::new(2).unwrap());
        let f4 = Field::extension(&f2, vec![1, 1, 1]).unwrap();
        assert!(decode_text(&f4, "1;1").is_err());
        assert!(decode_text(&f4, "1,2;0,1").is_err());
        assert!(decode_text(&f4, "1,x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn text_round_trip(p in prop::sample::select(vec![2u64, 3, 7, (1 << 61) - 1]),
                               w in 1usize..4, d in 0usize..20, seed in any::<u64>()) {
                let fpp = Field::prime(Fp64::new(p).unwrap());
                let k = if w == 1 { fpp.clone() } else {
                    Field::extension(&fpp, crate::classic::first_irreducible(&fpp, w).into_data()).unwrap()
                };
                let mut rng = RngHandle::new(seed, 0);
                let f = Poly::random_monic(&k, d, &mut rng);
                let s = encode_text(&f);
                prop_assert_eq!(s.split(';').count(), d + 1);
                prop_assert_eq!(decode_text(&k, &s).unwrap(), f.clone());
                let joined: Vec<String> = coordinates(&f).iter().map(|c| c.join(",")).collect();
                prop_assert_eq!(joined.join(";"), s);
            }
        }
    }
}
