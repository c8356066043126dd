//! Rational-integer helpers: primality, factorization, integer square roots.
//!
//! Factoring strips primes below 10⁶ by trial division, then splits the
//! cofactor with Brent's variant of Pollard rho using the fixed polynomial
//! sequence `x² + c`, `c = 1, 2, …`. Inputs above 2¹²⁸ are rejected.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a % m) * (b % m) % m
    } else {
        let p = BigUint::from(a) * BigUint::from(b) % BigUint::from(m);
        p.to_u128().expect("reduced below modulus")
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller–Rabin with the first 20 prime bases (deterministic well past 2⁶⁴).
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    match n.to_u128() {
        Some(v) => is_prime_u128(v),
        None => false,
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

fn brent_split(n: u128) -> u128 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u128.. {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u128, 1u64, 1u128, 1u128);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push(n);
        return;
    }
    let d = brent_split(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization of `n ≥ 1` as sorted `(prime, exponent)` pairs.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    assert!(n >= 1, "factor_u128 needs a positive input");
    let mut out: Vec<(u128, u32)> = Vec::new();
    let push = |p: u128, out: &mut Vec<(u128, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(e) => e.1 += 1,
        None => out.push((p, 1)),
    };
    let mut p: u128 = 2;
    while p <= TRIAL_LIMIT as u128 && p * p <= n {
        while n.is_multiple_of(p) {
            push(p, &mut out);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_into(n, &mut rest);
        for q in rest {
            push(q, &mut out);
        }
    }
    out.sort();
    out
}

/// Factor a positive big integer, rejecting inputs above 2¹²⁸.
pub fn factor(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let limit = BigUint::one() << 128u32;
    if *n > limit {
        return Err(Error::resource(
            format!("integer factorization of a {}-bit value", n.bits()),
            128u32,
        ));
    }
    if *n == limit {
        return Ok(vec![(BigUint::from(2u32), 128)]);
    }
    let v = n.to_u128().expect("below 2^128");
    Ok(factor_u128(v)
        .into_iter()
        .map(|(p, e)| (BigUint::from(p), e))
        .collect())
}

pub fn factor_int(n: &BigInt) -> Result<Vec<(BigUint, u32)>> {
    factor(n.magnitude())
}

/// Floor square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus, "isqrt of a negative value");
    n.sqrt()
}

/// Least common multiple of a list of positive integers.
pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigUint>) -> BigUint {
    values
        .into_iter()
        .fold(BigUint::one(), |acc, v| acc.lcm(v))
}
