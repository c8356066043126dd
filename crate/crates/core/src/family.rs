//! Finite families of non-associate Gaussian primes, grouped the way the
//! smooth-denominator search and the order lower bound consume them: an
//! optional Type II prime, conjugate pairs of Type III primes, and singles.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::height::{height_of_prime, height_prime_power};
use crate::primes::{classify, PrimeClass};
use crate::GaussInteger;

/// Role of one coordinate in an exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    /// Exponent `h` of the Type II prime.
    TypeII(GaussInteger),
    /// Exponent of one member of the conjugate pair with index `pair`.
    Pair { pair: usize, prime: GaussInteger },
    /// Exponent of a Type I or unpaired Type III prime.
    Single(GaussInteger),
}

impl Slot {
    pub fn prime(&self) -> &GaussInteger {
        match self {
            Slot::TypeII(p) | Slot::Single(p) | Slot::Pair { prime: p, .. } => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothFamily {
    type_ii: Option<GaussInteger>,
    pairs: Vec<(GaussInteger, GaussInteger)>,
    singles: Vec<GaussInteger>,
}

fn sort_key(p: &GaussInteger) -> (BigInt, BigInt, BigInt) {
    (p.norm(), p.re.clone(), p.im.clone())
}

impl SmoothFamily {
    /// Group a list of primes. Primes are canonicalized; associates,
    /// non-primes, and singles with repeated heights are rejected.
    pub fn new(primes: &[GaussInteger]) -> Result<Self> {
        let mut ps: Vec<GaussInteger> = Vec::with_capacity(primes.len());
        for p in primes {
            classify(p)?;
            let c = p.canonical();
            if ps.contains(&c) {
                return Err(Error::domain(format!("family contains associates of {c}")));
            }
            ps.push(c);
        }
        ps.sort_by_key(sort_key);

        let mut type_ii = None;
        let mut pairs = Vec::new();
        let mut singles: Vec<GaussInteger> = Vec::new();
        let mut used = vec![false; ps.len()];
        for i in 0..ps.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let p = &ps[i];
            match classify(p)? {
                PrimeClass::TypeII => type_ii = Some(p.clone()),
                PrimeClass::TypeIII => {
                    let partner = p.conj().canonical();
                    match (i + 1..ps.len()).find(|&j| !used[j] && ps[j] == partner) {
                        Some(j) => {
                            used[j] = true;
                            pairs.push((p.clone(), partner));
                        }
                        None => singles.push(p.clone()),
                    }
                }
                PrimeClass::TypeI => singles.push(p.clone()),
            }
        }
        let heights: Vec<BigInt> = singles
            .iter()
            .map(height_of_prime)
            .collect::<Result<_>>()?;
        for (i, h) in heights.iter().enumerate() {
            if heights[..i].contains(h) {
                return Err(Error::domain(format!("two single primes share height {h}")));
            }
        }
        Ok(SmoothFamily {
            type_ii,
            pairs,
            singles,
        })
    }

    /// Parse a comma-separated list such as `1+i,2+i,2-i`.
    pub fn parse(text: &str) -> Result<Self> {
        let primes = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(GaussInteger::parse)
            .collect::<Result<Vec<_>>>()?;
        SmoothFamily::new(&primes)
    }

    pub fn empty() -> Self {
        SmoothFamily {
            type_ii: None,
            pairs: Vec::new(),
            singles: Vec::new(),
        }
    }

    pub fn type_ii(&self) -> Option<&GaussInteger> {
        self.type_ii.as_ref()
    }

    pub fn pairs(&self) -> &[(GaussInteger, GaussInteger)] {
        &self.pairs
    }

    pub fn singles(&self) -> &[GaussInteger] {
        &self.singles
    }

    /// Exponent-vector layout: `[h] ++ [r₁, s₁, …] ++ [n₁, …]`.
    pub fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        if let Some(p) = &self.type_ii {
            out.push(Slot::TypeII(p.clone()));
        }
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            out.push(Slot::Pair { pair: k, prime: a.clone() });
            out.push(Slot::Pair { pair: k, prime: b.clone() });
        }
        out.extend(self.singles.iter().cloned().map(Slot::Single));
        out
    }

    pub fn arity(&self) -> usize {
        usize::from(self.type_ii.is_some()) + 2 * self.pairs.len() + self.singles.len()
    }

    pub fn primes(&self) -> Vec<GaussInteger> {
        self.slots().into_iter().map(|s| s.prime().clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.arity() == 0
    }

    fn check_arity(&self, exps: &[u64]) -> Result<()> {
        if exps.len() != self.arity() {
            return Err(Error::domain(format!(
                "exponent vector has {} entries, family expects {}",
                exps.len(),
                self.arity()
            )));
        }
        Ok(())
    }

    /// The canonical product `∏ primeᵉ` for an exponent vector.
    pub fn product(&self, exps: &[u64]) -> Result<GaussInteger> {
        self.check_arity(exps)?;
        let z = self
            .primes()
            .iter()
            .zip(exps)
            .fold(GaussInteger::one(), |acc, (p, &e)| &acc * &p.pow(e));
        Ok(z.canonical())
    }

    /// Height of the product from the per-prime closed forms; conjugate
    /// pairs contribute `H^max(r, s)`.
    pub fn height_of(&self, exps: &[u64]) -> Result<BigInt> {
        self.check_arity(exps)?;
        let mut h = BigInt::one();
        let mut i = 0;
        if let Some(p) = &self.type_ii {
            h *= height_prime_power(p, exps[0])?;
            i = 1;
        }
        for (a, _) in &self.pairs {
            let e = exps[i].max(exps[i + 1]);
            h *= height_prime_power(a, e)?;
            i += 2;
        }
        for p in &self.singles {
            h *= height_prime_power(p, exps[i])?;
            i += 1;
        }
        Ok(h)
    }

    /// Exponents of `z` over the family, or `None` if `z` has a prime factor
    /// outside it. `z` must be nonzero.
    pub fn exponents_of(&self, z: &GaussInteger) -> Option<Vec<u64>> {
        let mut rest = z.clone();
        let mut exps = Vec::with_capacity(self.arity());
        for p in self.primes() {
            let mut e = 0;
            while let Some(q) = rest.exact_div(&p) {
                rest = q;
                e += 1;
            }
            exps.push(e);
        }
        rest.is_unit().then_some(exps)
    }

    /// Fails if some family prime divides `beta`.
    pub fn check_coprime_to(&self, beta: &GaussInteger) -> Result<()> {
        match self.primes().into_iter().find(|p| beta.is_divisible_by(p)) {
            Some(p) => Err(Error::domain(format!("family prime {p} divides {beta}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for SmoothFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.primes().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}
