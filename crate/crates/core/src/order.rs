//! Residues modulo a Gaussian integer, the unit-group order `φ`, exact
//! multiplicative orders, order lifting along prime powers, and the
//! effective lower bound for orders modulo smooth moduli.
//!
//! For a prime `γ ∤ α` with `d = ord(α; γ)` and `m = ν_γ(α^d − 1)`:
//!
//! * Types I and III: `ord(α; γⁿ) = d` for `n ≤ m` and `p^(n−m)·d` beyond,
//!   with `p = H(γ)`.
//! * Type II: `d = 1` and the order is a power of two. Once the valuation of
//!   `α^(2^k) − 1` reaches 3 it grows by exactly 2 per squaring; below that it
//!   can jump (`3² − 1 = 8` has valuation 6 at `1+i`, not 4). The lift
//!   therefore tracks the squaring chain until the valuation is at least 3.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::family::{Slot, SmoothFamily};
use crate::height::height_of_prime;
use crate::primes::{classify, factor, PrimeClass};
use crate::GaussInteger;

/// A residue class modulo a nonzero Gaussian integer.
#[derive(Debug, Clone)]
pub struct Residue {
    rep: GaussInteger,
    modulus: GaussInteger,
}

impl Residue {
    pub fn new(x: &GaussInteger, modulus: &GaussInteger) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::domain("modulus must be nonzero"));
        }
        Ok(Residue {
            rep: x.rem_euclid(modulus)?,
            modulus: modulus.clone(),
        })
    }

    pub fn rep(&self) -> &GaussInteger {
        &self.rep
    }

    pub fn modulus(&self) -> &GaussInteger {
        &self.modulus
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        let rep = (&self.rep * &other.rep)
            .rem_euclid(&self.modulus)
            .expect("nonzero modulus");
        Residue {
            rep,
            modulus: self.modulus.clone(),
        }
    }

    pub fn pow(&self, exp: &BigUint) -> Residue {
        let mut acc = Residue::new(&GaussInteger::one(), &self.modulus).expect("nonzero modulus");
        let mut base = self.clone();
        for i in 0..exp.bits() {
            if exp.bit(i) {
                acc = acc.mul(&base);
            }
            if i + 1 < exp.bits() {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_one(&self) -> bool {
        (&self.rep - &GaussInteger::one()).is_divisible_by(&self.modulus)
    }
}

impl PartialEq for Residue {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.is_associate(&other.modulus)
            && (&self.rep - &other.rep).is_divisible_by(&self.modulus)
    }
}

/// `α^e mod γ` as a Euclidean remainder.
pub fn mod_pow(alpha: &GaussInteger, exp: &BigUint, gamma: &GaussInteger) -> Result<GaussInteger> {
    Ok(Residue::new(alpha, gamma)?.pow(exp).rep)
}

/// Size of `(ℤ[i]/(γ))^×`.
pub fn euler_phi_zi(gamma: &GaussInteger) -> Result<BigUint> {
    if gamma.is_zero() {
        return Err(Error::domain("phi of zero is undefined"));
    }
    let f = factor(gamma)?;
    Ok(f.factors.iter().fold(BigUint::one(), |acc, (p, k)| {
        let n = p.norm().to_biguint().expect("norm is non-negative");
        let k = *k as u32;
        acc * (Pow::pow(&n, k) - Pow::pow(&n, k - 1))
    }))
}

fn require_coprime(alpha: &GaussInteger, gamma: &GaussInteger) -> Result<()> {
    if gamma.is_zero() {
        return Err(Error::domain("modulus must be nonzero"));
    }
    if !alpha.is_coprime(gamma) {
        return Err(Error::domain(format!("{alpha} and {gamma} are not coprime")));
    }
    Ok(())
}

/// Exact multiplicative order of `α` modulo `γ` by descent through the
/// divisors of `φ(γ)`. `ord(α; unit) = 1`.
pub fn ord(alpha: &GaussInteger, gamma: &GaussInteger) -> Result<BigUint> {
    require_coprime(alpha, gamma)?;
    if gamma.is_unit() {
        return Ok(BigUint::one());
    }
    let phi = euler_phi_zi(gamma)?;
    let base = Residue::new(alpha, gamma)?;
    let mut order = phi.clone();
    for (p, e) in arith::factor(&phi)? {
        for _ in 0..e {
            let (q, r) = order.div_rem(&p);
            if r.is_zero() && base.pow(&q).is_one() {
                order = q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// `ν_γ(α^e − 1)`, or `None` when `α^e = 1` exactly.
fn valuation_of_power_minus_one(alpha: &GaussInteger, e: &BigUint, gamma: &GaussInteger) -> Option<u64> {
    if alpha.is_unit() {
        let x = &alpha.pow(e.to_u64().expect("unit exponent")) - &GaussInteger::one();
        if x.is_zero() {
            return None;
        }
    }
    let mut k = 4u64;
    loop {
        let modulus = gamma.pow(k);
        let r = mod_pow(alpha, e, &modulus).expect("nonzero modulus");
        let mut x = &r - &GaussInteger::one();
        if !x.is_divisible_by(&modulus) {
            let mut v = 0;
            while let Some(q) = x.exact_div(gamma) {
                x = q;
                v += 1;
            }
            return Some(v);
        }
        k *= 2;
    }
}

/// The data `(d, m)` for `α` at a prime `γ ∤ α`, plus the squaring chain
/// used for Type II primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderLiftData {
    gamma: GaussInteger,
    class: PrimeClass,
    d: BigUint,
    m: Option<u64>,
    chain: Vec<Option<u64>>,
}

impl OrderLiftData {
    pub fn compute(alpha: &GaussInteger, gamma: &GaussInteger) -> Result<Self> {
        let class = classify(gamma)?;
        if alpha.is_divisible_by(gamma) {
            return Err(Error::domain(format!("{gamma} divides {alpha}")));
        }
        let d = ord(alpha, gamma)?;
        let m = valuation_of_power_minus_one(alpha, &d, gamma);
        let mut chain = Vec::new();
        if class == PrimeClass::TypeII {
            if !d.is_one() {
                return Err(Error::domain("order modulo a Type II prime must be 1"));
            }
            let mut e = BigUint::one();
            loop {
                let v = valuation_of_power_minus_one(alpha, &e, gamma);
                chain.push(v);
                match v {
                    Some(v) if v < 3 => e <<= 1u32,
                    _ => break,
                }
            }
        }
        Ok(OrderLiftData {
            gamma: gamma.clone(),
            class,
            d,
            m,
            chain,
        })
    }

    pub fn gamma(&self) -> &GaussInteger {
        &self.gamma
    }

    pub fn class(&self) -> PrimeClass {
        self.class
    }

    /// `ord(α; γ)`.
    pub fn d(&self) -> &BigUint {
        &self.d
    }

    /// `ν_γ(α^d − 1)`; `None` when `α^d = 1`.
    pub fn m(&self) -> Option<u64> {
        self.m
    }

    /// Type II only: `ν_γ(α^(2^k) − 1)` for `k = 0, 1, …` up to the first
    /// value `≥ 3` (or exact `1`, recorded as `None`).
    pub fn squaring_chain(&self) -> &[Option<u64>] {
        &self.chain
    }

    /// `ord(α; γⁿ)` without exponentiating at level `n`.
    pub fn order_lift(&self, n: u64) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        match self.class {
            PrimeClass::TypeI | PrimeClass::TypeIII => match self.m {
                Some(m) if n > m => {
                    let p = height_of_prime(&self.gamma)
                        .expect("prime")
                        .to_biguint()
                        .expect("positive");
                    Pow::pow(p, n - m) * &self.d
                }
                _ => self.d.clone(),
            },
            PrimeClass::TypeII => {
                for (k, v) in self.chain.iter().enumerate() {
                    match v {
                        None => return BigUint::one() << k,
                        Some(v) if *v >= n => return BigUint::one() << k,
                        _ => {}
                    }
                }
                let k = self.chain.len() as u64 - 1;
                let top = self.chain[k as usize].expect("chain ends on a finite valuation");
                BigUint::one() << (k + (n - top).div_ceil(2))
            }
        }
    }

    /// The single-step closed form `p^(n−m)·d` (Types I/III) or
    /// `2^⌈(n−m)/2⌉` (Type II), valid for Type II only when `m ≥ 3`.
    pub fn closed_form_order(&self, n: u64) -> BigUint {
        match (self.class, self.m) {
            (PrimeClass::TypeII, Some(m)) if n > m => BigUint::one() << (n - m).div_ceil(2),
            _ => self.order_lift(n),
        }
    }
}

/// `ord(α; γ)` as the lcm of prime-power orders from `order_lift`.
pub fn crt_order(alpha: &GaussInteger, gamma: &GaussInteger) -> Result<BigUint> {
    require_coprime(alpha, gamma)?;
    let f = factor(gamma)?;
    let mut acc = BigUint::one();
    for (p, e) in &f.factors {
        let lift = OrderLiftData::compute(alpha, p)?;
        acc = acc.lcm(&lift.order_lift(*e));
    }
    Ok(acc)
}

/// An exact positive number `coeff · √2^root2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootTwoRational {
    pub coeff: Ratio<BigInt>,
    pub root2: bool,
}

impl RootTwoRational {
    pub fn from_ratio(coeff: Ratio<BigInt>) -> Self {
        RootTwoRational { coeff, root2: false }
    }

    /// `2^(e/2)`.
    pub fn pow_sqrt2(e: i64) -> Self {
        let half = Integer::div_floor(&e, &2);
        let two = Ratio::from_integer(BigInt::from(2));
        let coeff = if half >= 0 {
            Pow::pow(two, half as u64)
        } else {
            Pow::pow(two.recip(), half.unsigned_abs())
        };
        RootTwoRational {
            coeff,
            root2: e.rem_euclid(2) == 1,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeff = &self.coeff * &other.coeff;
        if self.root2 && other.root2 {
            coeff *= BigInt::from(2);
        }
        RootTwoRational {
            coeff,
            root2: self.root2 ^ other.root2,
        }
    }

    /// `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &Self) -> Self {
        let mut coeff = &self.coeff / &other.coeff;
        if other.root2 && !self.root2 {
            // a / (b√2) = (a / 2b)·√2
            coeff /= BigInt::from(2);
        }
        RootTwoRational {
            coeff,
            root2: self.root2 ^ other.root2,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        RootTwoRational {
            coeff: &self.coeff * k,
            root2: self.root2,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        RootTwoRational {
            coeff: &self.coeff / k,
            root2: self.root2,
        }
    }

    /// Exact comparison `self ≤ n`.
    pub fn le_int(&self, n: &BigUint) -> bool {
        let n = Ratio::from_integer(BigInt::from(n.clone()));
        if !self.root2 || self.coeff <= Ratio::zero() {
            return self.coeff <= n;
        }
        &self.coeff * &self.coeff * BigInt::from(2) <= &n * &n
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.numer().to_f64().unwrap_or(f64::INFINITY)
            / self.coeff.denom().to_f64().unwrap_or(f64::INFINITY);
        if self.root2 {
            c * std::f64::consts::SQRT_2
        } else {
            c
        }
    }
}

impl fmt::Display for RootTwoRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.root2 {
            f.write_str("*sqrt(2)")?;
        }
        Ok(())
    }
}

impl Serialize for RootTwoRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Per-prime data `(d_τ, m_τ)` recorded in a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeOrderData {
    pub prime: GaussInteger,
    pub height: BigInt,
    pub d: BigUint,
    pub m: u64,
}

/// Constants of the order lower bound for a fixed `α` and prime family,
/// computed once and reused across exponent vectors.
#[derive(Debug, Clone)]
pub struct LowerBoundCertificate {
    alpha: GaussInteger,
    family: SmoothFamily,
    type_ii: Option<OrderLiftData>,
    per_prime: Vec<PrimeOrderData>,
    q: BigInt,
    c2_closed_form: RootTwoRational,
    c2: RootTwoRational,
    c3: RootTwoRational,
}

impl LowerBoundCertificate {
    pub fn new(alpha: &GaussInteger, family: &SmoothFamily) -> Result<Self> {
        if alpha.is_zero() || alpha.is_unit() {
            return Err(Error::domain(format!(
                "{alpha} has bounded orders; the lower bound needs |α| > 1"
            )));
        }
        for p in family.primes() {
            if alpha.is_divisible_by(&p) {
                return Err(Error::domain(format!("family prime {p} divides {alpha}")));
            }
        }
        let mut q = BigInt::one();
        let mut per_prime = Vec::new();
        for slot in family.slots() {
            if let Slot::TypeII(_) = slot {
                continue;
            }
            let p = slot.prime();
            let lift = OrderLiftData::compute(alpha, p)?;
            let m = lift.m().expect("α is not a root of unity");
            let height = height_of_prime(p)?;
            q *= Pow::pow(&height, m);
            per_prime.push(PrimeOrderData {
                prime: p.clone(),
                height,
                d: lift.d().clone(),
                m,
            });
        }
        let (type_ii, c2_closed_form, c2) = match family.type_ii() {
            None => (None, RootTwoRational::pow_sqrt2(0), RootTwoRational::pow_sqrt2(0)),
            Some(p) => {
                let lift = OrderLiftData::compute(alpha, p)?;
                let m = lift.m().expect("α is not a root of unity") as i64;
                let closed = -m - 2;
                let exact = Self::type_ii_exponent_infimum(&lift);
                (
                    Some(lift),
                    RootTwoRational::pow_sqrt2(closed),
                    RootTwoRational::pow_sqrt2(closed.min(exact)),
                )
            }
        };
        let c3 = c2.div_int(&q);
        Ok(LowerBoundCertificate {
            alpha: alpha.clone(),
            family: family.clone(),
            type_ii,
            per_prime,
            q,
            c2_closed_form,
            c2,
            c3,
        })
    }

    /// `min_n (2·log₂ ord(α; γⁿ) − n)`, i.e. `C₂ = 2^(min/2)` is the largest
    /// constant with `ord(α; γⁿ) ≥ C₂·2^(n/2)` for every `n`.
    fn type_ii_exponent_infimum(lift: &OrderLiftData) -> i64 {
        let top = lift
            .squaring_chain()
            .last()
            .copied()
            .flatten()
            .expect("α is not a root of unity");
        (0..=top + 2)
            .map(|n| {
                let k = lift.order_lift(n).bits() as i64 - 1;
                2 * k - n as i64
            })
            .min()
            .expect("nonempty range")
    }

    pub fn alpha(&self) -> &GaussInteger {
        &self.alpha
    }

    pub fn family(&self) -> &SmoothFamily {
        &self.family
    }

    pub fn per_prime(&self) -> &[PrimeOrderData] {
        &self.per_prime
    }

    /// `m` for the Type II prime, when present.
    pub fn type_ii_m(&self) -> Option<u64> {
        self.type_ii.as_ref().and_then(|l| l.m())
    }

    /// `Q = ∏ H(τ)^{m_τ}` over the odd primes of the family.
    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// `2^−(m/2+1)` from the single-step lifting formula.
    pub fn c2_closed_form(&self) -> &RootTwoRational {
        &self.c2_closed_form
    }

    /// The Type II constant actually used: the closed form, lowered to the
    /// exact infimum when the squaring chain jumps.
    pub fn c2(&self) -> &RootTwoRational {
        &self.c2
    }

    pub fn c3(&self) -> &RootTwoRational {
        &self.c3
    }

    /// `C₃ · 2^(h/2) · ∏ H(ηᵢ)^max(rᵢ,sᵢ) · ∏ H(βⱼ)^nⱼ`.
    pub fn lower_bound(&self, exps: &[u64]) -> Result<RootTwoRational> {
        let slots = self.family.slots();
        if exps.len() != slots.len() {
            return Err(Error::domain(format!(
                "exponent vector has {} entries, family expects {}",
                exps.len(),
                slots.len()
            )));
        }
        let mut acc = self.c3.clone();
        let mut i = 0;
        while i < slots.len() {
            match &slots[i] {
                Slot::TypeII(_) => {
                    acc = acc.mul(&RootTwoRational::pow_sqrt2(exps[i] as i64));
                    i += 1;
                }
                Slot::Pair { prime, .. } => {
                    let e = exps[i].max(exps[i + 1]);
                    acc = acc.mul_int(&Pow::pow(height_of_prime(prime)?, e));
                    i += 2;
                }
                Slot::Single(prime) => {
                    acc = acc.mul_int(&Pow::pow(height_of_prime(prime)?, exps[i]));
                    i += 1;
                }
            }
        }
        Ok(acc)
    }
}

/// Build the certificate for `(α, family)` and evaluate it at `exps`.
pub fn order_lower_bound(cert: &LowerBoundCertificate, exps: &[u64]) -> Result<RootTwoRational> {
    cert.lower_bound(exps)
}
