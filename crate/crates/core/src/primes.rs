//! Gaussian primes: classification, primality, two-squares decomposition,
//! unique factorization, and valuations.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::zi::Unit;
use crate::GaussInteger;

const BRUTE_FORCE_TWO_SQUARES: u64 = 1_000_000;

/// The three kinds of Gaussian primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PrimeClass {
    /// Associate of a rational prime `q ≡ 3 (mod 4)`.
    TypeI,
    /// Associate of `1+i`.
    TypeII,
    /// Norm is a rational prime `≡ 1 (mod 4)`.
    TypeIII,
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeClass::TypeI => "TypeI",
            PrimeClass::TypeII => "TypeII",
            PrimeClass::TypeIII => "TypeIII",
        })
    }
}

fn mod4(n: &BigInt) -> u32 {
    n.mod_floor(&BigInt::from(4)).to_u32().unwrap()
}

/// Classification of `z` if it is a Gaussian prime.
fn prime_class(z: &GaussInteger) -> Option<PrimeClass> {
    if z.is_zero() || z.is_unit() {
        return None;
    }
    if z.is_axial() {
        let q = z.re.abs() + z.im.abs();
        return (arith::is_prime(&q) && mod4(&q) == 3).then_some(PrimeClass::TypeI);
    }
    let n = z.norm();
    if !arith::is_prime(&n) {
        return None;
    }
    Some(if n == BigInt::from(2) {
        PrimeClass::TypeII
    } else {
        PrimeClass::TypeIII
    })
}

pub fn is_prime(z: &GaussInteger) -> bool {
    prime_class(z).is_some()
}

pub fn classify(p: &GaussInteger) -> Result<PrimeClass> {
    prime_class(p).ok_or_else(|| Error::domain(format!("{p} is not a Gaussian prime")))
}

/// The unique `(s, t)` with `s² + t² = p`, `0 < s < t`, for a prime `p ≡ 1 (mod 4)`.
pub fn two_squares(p: &BigInt) -> Result<(BigInt, BigInt)> {
    if mod4(p) != 1 || !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    let (s, t) = if *p < BigInt::from(BRUTE_FORCE_TWO_SQUARES) {
        two_squares_brute(p)
    } else {
        two_squares_descent(p)
    };
    Ok(if s < t { (s, t) } else { (t, s) })
}

fn two_squares_brute(p: &BigInt) -> (BigInt, BigInt) {
    let p = p.to_u64().unwrap();
    let mut s = 1u64;
    loop {
        let rest = p - s * s;
        let t = rest.isqrt();
        if t * t == rest {
            return (s.into(), t.into());
        }
        s += 1;
    }
}

/// Find a square root of −1 mod p, then run the Euclidean descent until the
/// remainder drops below √p.
fn two_squares_descent(p: &BigInt) -> (BigInt, BigInt) {
    let exp = (p - 1u32) / 4u32;
    let mut root = BigInt::zero();
    for c in 2u32.. {
        let x = BigInt::from(c).modpow(&exp, p);
        if (&x * &x + 1u32).mod_floor(p).is_zero() {
            root = x;
            break;
        }
    }
    let limit = arith::isqrt(p);
    let (mut a, mut b) = (p.clone(), root);
    while b > limit {
        let r = a.mod_floor(&b);
        a = b;
        b = r;
    }
    let t = arith::isqrt(&(p - &b * &b));
    (b, t)
}

/// Repeatedly divide by `gamma`; returns the count and the cofactor.
fn strip(alpha: &GaussInteger, gamma: &GaussInteger) -> (u64, GaussInteger) {
    let mut count = 0;
    let mut rest = alpha.clone();
    while let Some(q) = rest.exact_div(gamma) {
        rest = q;
        count += 1;
    }
    (count, rest)
}

/// `ν_γ(α)`: the largest `m` with `γ^m | α`.
pub fn valuation(gamma: &GaussInteger, alpha: &GaussInteger) -> Result<u64> {
    if alpha.is_zero() {
        return Err(Error::domain("valuation of zero is infinite"));
    }
    classify(gamma)?;
    Ok(strip(alpha, gamma).0)
}

/// `unit · ∏ primeᵉ` with canonical, pairwise non-associate primes sorted by
/// `(norm, re, im)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Unit,
    pub factors: Vec<(GaussInteger, u64)>,
}

impl Factorization {
    pub fn product(&self) -> GaussInteger {
        self.factors
            .iter()
            .fold(self.unit.to_gauss(), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn exponent_of(&self, prime: &GaussInteger) -> u64 {
        self.factors
            .iter()
            .find(|(p, _)| p.is_associate(prime))
            .map_or(0, |(_, e)| *e)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (p, e) in &self.factors {
            write!(f, " * ({p})^{e}")?;
        }
        Ok(())
    }
}

/// Gaussian primes above the rational prime `q`, canonical.
pub fn primes_above(q: &BigUint) -> Result<Vec<GaussInteger>> {
    let q = BigInt::from(q.clone());
    if q == BigInt::from(2) {
        return Ok(vec![GaussInteger::from_i64(1, 1)]);
    }
    match mod4(&q) {
        3 => Ok(vec![GaussInteger::from_int(q)]),
        1 => {
            let (s, t) = two_squares(&q)?;
            Ok(vec![
                GaussInteger::new(s.clone(), t.clone()),
                GaussInteger::new(t, s),
            ])
        }
        _ => Err(Error::domain(format!("{q} is not a prime"))),
    }
}

pub fn factor(z: &GaussInteger) -> Result<Factorization> {
    if z.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let mut rest = z.clone();
    let mut factors = Vec::new();
    for (q, _) in arith::factor_int(&z.norm())? {
        for pi in primes_above(&q)? {
            let (e, r) = strip(&rest, &pi);
            rest = r;
            if e > 0 {
                factors.push((pi, e));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        (a.norm(), &a.re, &a.im).cmp(&(b.norm(), &b.re, &b.im))
    });
    let unit = rest
        .as_unit()
        .expect("cofactor after stripping all primes is a unit");
    Ok(Factorization { unit, factors })
}

/// All canonical Gaussian primes with norm at most `bound`, sorted by
/// `(norm, re, im)`.
pub fn canonical_primes_up_to(bound: u64) -> Vec<GaussInteger> {
    let mut out = Vec::new();
    let r = bound.isqrt() as i64;
    for a in 1..=r {
        for b in 0..=r {
            if (a * a + b * b) as u64 > bound {
                continue;
            }
            let z = GaussInteger::from_i64(a, b);
            if is_prime(&z) {
                out.push(z);
            }
        }
    }
    out.sort_by(|a, b| (a.norm(), &a.re, &a.im).cmp(&(b.norm(), &b.re, &b.im)));
    out
}
