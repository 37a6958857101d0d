//! Integer factorization helpers backing rational root extraction.
//!
//! Candidate rational roots of an integer polynomial are ratios of divisors
//! of the constant and leading coefficients. Those coefficients are products
//! of small spectral data here, but they can still be numerically huge, so
//! divisor enumeration goes through an actual factorization: trial division
//! for small primes, then Miller-Rabin plus Pollard rho for what remains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn small_primes() -> impl Iterator<Item = u64> {
    // Trial division cutoff; rho handles anything bigger.
    const LIMIT: u64 = 10_000;
    (2..=LIMIT).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn mod_pow(mut base: BigInt, mut exp: BigInt, modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::one();
    base %= modulus;
    while exp.is_positive() {
        if exp.is_odd() {
            acc = acc * &base % modulus;
        }
        base = &base * &base % modulus;
        exp >>= 1;
    }
    acc
}

fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // Deterministic witness set for anything below 3.3 * 10^24; inputs here
    // are far smaller.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(BigInt::from(a), d.clone(), n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    // n is odd, composite, and has no small factors at this point.
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// Prime factorization of |n| as (prime, exponent) pairs; |n| must be >= 1.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "cannot factor zero");
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, factors: &mut Vec<(BigInt, u32)>| {
        if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += 1;
        } else {
            factors.push((p, 1));
        }
    };
    for p in small_primes() {
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
            push(p.clone(), &mut factors);
        }
        if n.is_one() {
            break;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut factors);
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    factors
}

/// All positive divisors of |n| (n nonzero). Sorted ascending.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let snapshot = out.clone();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= &p;
            out.extend(snapshot.iter().map(|d| d * &power));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_large() {
        let n = BigInt::from(2u64 * 2 * 3 * 25013); // 25013 is prime
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![(BigInt::from(2), 2), (BigInt::from(3), 1), (BigInt::from(25013), 1)]
        );
    }

    #[test]
    fn factors_product_of_two_big_primes() {
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factorize(&(&p * &q));
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn divisor_enumeration() {
        let d = divisors(&BigInt::from(12));
        let expect: Vec<BigInt> = [1, 2, 3, 4, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(d, expect);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigInt::from(2)));
        assert!(is_probable_prime(&BigInt::from(1_000_000_007u64)));
        assert!(!is_probable_prime(&BigInt::from(1_000_000_007u64 * 3)));
    }
}
