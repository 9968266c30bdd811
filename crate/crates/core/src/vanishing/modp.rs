//! Arithmetic in Z/pZ for word-sized primes, plus the Chinese remainder and
//! rational reconstruction steps of multi-modular algorithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polyring::Rational;

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a non-zero residue modulo the prime `p`.
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62 in decreasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while n > 2 {
            let c = n;
            n -= 2;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    })
}

pub fn bigint_mod(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Image of `r` in Z/pZ; `None` when p divides the denominator.
pub fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let d = bigint_mod(r.denom(), p);
    (d != 0).then(|| mul(bigint_mod(r.numer(), p), inv(d, p), p))
}

/// Combine `x = a mod m` with `x = b mod p` into `x mod m*p`, result in [0, m*p).
pub fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> (BigInt, BigInt) {
    // x = a + m * ((b - a) * m^{-1} mod p)
    let a_p = bigint_mod(a, p);
    let m_inv = inv(bigint_mod(m, p), p);
    let k = mul(sub(b, a_p, p), m_inv, p);
    let x = a + m * BigInt::from(k);
    (x, m * BigInt::from(p))
}

/// The fraction n/d with |n|, d <= sqrt(m/2) and n = a d (mod m), if any.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2u8)).magnitude().sqrt();
    let bound = BigInt::from(bound);
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_primes_and_composites() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime((1 << 61) - 1));
    }

    #[test]
    fn prime_stream_is_descending_and_large() {
        let ps: Vec<u64> = primes().take(5).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p > (1 << 61) && is_prime(p)));
    }

    #[test]
    fn reconstruction_recovers_fraction() {
        let target = Rational::new(BigInt::from(-112585), BigInt::from(215537));
        let (mut a, mut m) = (BigInt::zero(), BigInt::one());
        for p in primes().take(2) {
            (a, m) = crt(&a, &m, rational_mod(&target, p).unwrap(), p);
        }
        assert_eq!(rational_reconstruct(&a, &m), Some(target));
    }

    proptest! {
        #[test]
        fn crt_agrees_with_both_moduli(a in 0u64..1_000_000, b in 0u64..1_000_000) {
            let mut it = primes();
            let (p, q) = (it.next().unwrap(), it.next().unwrap());
            let (x, m) = crt(&BigInt::from(a % p), &BigInt::from(p), b % q, q);
            prop_assert_eq!(bigint_mod(&x, p), a % p);
            prop_assert_eq!(bigint_mod(&x, q), b % q);
            prop_assert!(x >= BigInt::zero() && x < m);
        }

        #[test]
        fn inverse_is_inverse(a in 1u64..u64::MAX) {
            let p = primes().next().unwrap();
            let a = a % p;
            prop_assume!(a != 0);
            prop_assert_eq!(mul(a, inv(a, p), p), 1);
        }

        #[test]
        fn small_fractions_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rational::new(n.into(), d.into());
            let p = primes().next().unwrap();
            let a = BigInt::from(rational_mod(&r, p).unwrap());
            prop_assert_eq!(rational_reconstruct(&a, &BigInt::from(p)), Some(r));
        }
    }
}
