//! Primality testing and integer factorization for word-sized and
//! arbitrary-precision integers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::rng::RngHandle;

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const EXTRA_ROUNDS: usize = 20;
/// Seed of the stream used for the extra random Miller-Rabin rounds.
const MR_SEED: u64 = 0x4d52_2d72_6f75_6e64;

#[inline]
fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod64(r, b, m);
        }
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for every `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = powmod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mr_round(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let nm1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin with the fixed witnesses 2..37, deterministic below 2^64,
/// followed by 20 rounds with pseudo-random witnesses for larger inputs.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    for &w in &WITNESSES {
        if !mr_round(n, &BigUint::from(w), &d, s) {
            return false;
        }
    }
    let mut rng = RngHandle::new(MR_SEED, 0);
    let span = n - 3u32;
    for _ in 0..EXTRA_ROUNDS {
        let a = rng.uniform_biguint(&span) + 2u32;
        if !mr_round(n, &a, &d, s) {
            return false;
        }
    }
    true
}

fn gcd64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod64(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            // batch gcds to cut the number of divisions
            let mut prod = 1u64;
            let (xs, ys) = (x, y);
            for _ in 0..64 {
                x = f(x);
                y = f(f(y));
                prod = mulmod64(prod, x.abs_diff(y), n);
                if prod == 0 {
                    break;
                }
            }
            d = gcd64(prod, n);
            if d == n || prod == 0 {
                // replay one step at a time from the batch start
                (x, y) = (xs, ys);
                loop {
                    x = f(x);
                    y = f(f(y));
                    d = gcd64(x.abs_diff(y), n);
                    if d != 1 {
                        break;
                    }
                }
            }
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut primes = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Factorization by trial division; used where inputs are tiny.
pub fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Valuation of `n` at `l`.
pub fn valuation(mut n: u64, l: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut e = 0;
    while n % l == 0 {
        n /= l;
        e += 1;
    }
    e
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Integer p-th root test helper: returns `(base, exponent)` with
/// `q = base^exponent` when `base` is prime.
pub fn prime_power(q: &BigUint) -> Option<(BigUint, u32)> {
    if q.is_zero() || q.is_one() {
        return None;
    }
    let bits = q.bits() as u32;
    for e in (1..=bits).rev() {
        let r = q.nth_root(e);
        if r.pow(e) == *q && is_probable_prime(&r) {
            return Some((r, e));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), naive_prime(n), "n={n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [
            2047u64,
            1373653,
            25326001,
            3215031751,
            2152302898747,
            3474749660383,
        ] {
            assert!(!is_prime_u64(n), "n={n}");
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_primes() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m127));
        let c = &m127 * BigUint::from(1000003u32);
        assert!(!is_probable_prime(&c));
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [
            1u64,
            2,
            360,
            1000003 * 999983,
            600851475143,
            (1 << 61) - 1,
            4294967297,
        ] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
            assert_eq!(f, factor_small_checked(n));
        }
    }

    fn factor_small_checked(n: u64) -> Vec<(u64, u32)> {
        if n > 1 << 40 {
            factor_u64(n)
        } else {
            factor_small(n)
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(
            prime_power(&BigUint::from(343u32)),
            Some((BigUint::from(7u32), 3))
        );
        assert_eq!(
            prime_power(&BigUint::from(2u32)),
            Some((BigUint::from(2u32), 1))
        );
        assert_eq!(prime_power(&BigUint::from(12u32)), None);
    }
}
