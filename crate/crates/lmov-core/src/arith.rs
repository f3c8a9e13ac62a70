//! Integer helpers: divisors, Möbius, p-adic valuation, factorial variants,
//! and the generalized binomial coefficient.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// All positive divisors of `n`, ascending. `n` must be >= 1.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors: n must be >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Möbius function. `n` must be >= 1.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius: n must be >= 1");
    let mut n = n;
    let mut sign = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Trial-division primality; adequate for the desk-scale ranges used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// p-adic valuation of `n`. Returns None for n = 0 (infinite valuation).
pub fn vp(p: u64, n: &BigInt) -> Option<u64> {
    assert!(p >= 2, "vp: p must be >= 2");
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        n = q;
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Product of all i in 1..=n with p not dividing i.
pub fn fp(p: u64, n: u64) -> BigInt {
    assert!(p >= 2, "fp: p must be >= 2");
    let mut acc = BigInt::one();
    for i in 1..=n {
        if i % p != 0 {
            acc *= i;
        }
    }
    acc
}

/// Binomial coefficient C(n, k) for n >= 0, 0 <= k; zero when k > n.
fn binom_nonneg(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial coefficient with integer upper argument:
/// C(n, 0) = 1; for n >= 0 the usual value (zero when 0 <= n < k);
/// for n < 0, C(n, k) = (-1)^k C(-n+k-1, k). Negative k gives zero.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if k == 0 {
        return BigInt::one();
    }
    if n >= 0 {
        binom_nonneg(n as u64, k as u64)
    } else {
        let v = binom_nonneg((-n + k - 1) as u64, k as u64);
        if k % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// (-1)^e for any integer e.
pub fn neg_one_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
