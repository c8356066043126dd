//! Homogeneous self-similar sets `K = K_{β,D}` generated by the maps
//! `φ_j(z) = (z + t_j)/β`, and eventually periodic codings of their points.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::{GaussInteger, GaussRational};

/// Default limit on state-graph nodes and composition working sets.
pub const DEFAULT_NODE_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IfsSpec {
    beta: GaussInteger,
    digits: Vec<GaussRational>,
    gamma: GaussInteger,
    scaled_digits: Vec<GaussInteger>,
}

impl IfsSpec {
    pub fn new(beta: GaussInteger, digits: Vec<GaussRational>) -> Result<Self> {
        if beta.norm() < BigInt::from(2) {
            return Err(Error::domain(format!("base {beta} must have norm at least 2")));
        }
        if digits.is_empty() {
            return Err(Error::domain("digit set must be nonempty"));
        }
        for (i, t) in digits.iter().enumerate() {
            if digits[..i].contains(t) {
                return Err(Error::domain(format!("digit {t} is repeated")));
            }
        }
        let gamma = digits
            .iter()
            .fold(GaussInteger::one(), |acc, t| acc.lcm(t.den()))
            .canonical();
        let scaled_digits = digits
            .iter()
            .map(|t| {
                t.num()
                    * &gamma
                        .exact_div(t.den())
                        .expect("lcm is a multiple of every denominator")
            })
            .collect();
        Ok(IfsSpec {
            beta,
            digits,
            gamma,
            scaled_digits,
        })
    }

    /// Parse `--beta` and a comma-separated `--digits` list.
    pub fn parse(beta: &str, digits: &str) -> Result<Self> {
        let beta = GaussInteger::parse(beta.trim())?;
        let digits = digits
            .split(',')
            .map(|d| GaussRational::parse(d.trim()))
            .collect::<Result<Vec<_>>>()?;
        IfsSpec::new(beta, digits)
    }

    pub fn beta(&self) -> &GaussInteger {
        &self.beta
    }

    pub fn digits(&self) -> &[GaussRational] {
        &self.digits
    }

    /// Number of maps `ℓ`.
    pub fn ell(&self) -> usize {
        self.digits.len()
    }

    /// Canonical lcm `Γ` of the digit denominators.
    pub fn gamma(&self) -> &GaussInteger {
        &self.gamma
    }

    /// `Γ·t_j`, integral by construction.
    pub fn scaled_digits(&self) -> &[GaussInteger] {
        &self.scaled_digits
    }

    /// `s = 2 ln ℓ / ln N(β)`.
    pub fn similarity_dimension(&self) -> f64 {
        dimension_from_count(self.ell() as f64, 1, &self.beta)
    }

    /// A rational `R′²` with `K ⊆ {|z|² ≤ R′²}`: `T²/r²` where `T² = max |t_j|²`
    /// and `r = ⌊10⁶√N(β)⌋/10⁶ − 1 ≤ |β| − 1`.
    pub fn bounding_radius_sq(&self) -> Ratio<BigInt> {
        let t_sq = self
            .digits
            .iter()
            .map(|t| t.abs_sq())
            .max()
            .expect("nonempty digit set");
        if t_sq.is_zero() {
            return t_sq;
        }
        let scale = BigInt::from(1_000_000);
        let root = (self.beta.norm() * &scale * &scale).sqrt();
        let r = Ratio::new(root - &scale, scale);
        t_sq / (&r * &r)
    }

    /// `φ_j(z)`.
    pub fn apply(&self, j: usize, z: &GaussRational) -> GaussRational {
        let beta = GaussRational::from_int(self.beta.clone());
        (z + &self.digits[j])
            .checked_div(&beta)
            .expect("nonzero base")
    }

    /// Constants `c_I = Σ t_{i_k} β^{n−k}` over all words of length `n`, as
    /// numerators over `Γ`, deduplicated. Level sizes before deduplication
    /// are held below `cap`.
    pub fn composed_constants(&self, n: u32, cap: usize) -> Result<HashSet<GaussInteger>> {
        let mut level: HashSet<GaussInteger> = HashSet::from([GaussInteger::zero()]);
        for _ in 0..n {
            let size = level.len().saturating_mul(self.ell());
            if size > cap {
                return Err(Error::resource(
                    format!("composition working set of {size} maps"),
                    cap as u64,
                ));
            }
            let mut next = HashSet::with_capacity(size);
            for c in &level {
                let bc = c * &self.beta;
                for t in &self.scaled_digits {
                    next.insert(&bc + t);
                }
            }
            level = next;
        }
        Ok(level)
    }

    pub fn compose_depth(&self, n: u32, cap: usize) -> Result<DimensionReport> {
        if n == 0 {
            return Err(Error::domain("composition depth must be at least 1"));
        }
        let distinct = self.composed_constants(n, cap)?.len();
        Ok(DimensionReport {
            depth: n,
            distinct_maps: distinct as u64,
            s_n: dimension_from_count(distinct as f64, n, &self.beta),
            s: self.similarity_dimension(),
        })
    }

    /// Depth-`n` cylinder cover: `ℓ_n` balls of radius `R′·N(β)^(−n/2)`.
    pub fn box_cover_count(&self, n: u32, cap: usize) -> Result<BoxCover> {
        let count = self.composed_constants(n, cap)?.len();
        let radius_sq = self.bounding_radius_sq()
            / Ratio::from_integer(num_traits::Pow::pow(self.beta.norm(), n));
        Ok(BoxCover {
            depth: n,
            count: count as u64,
            radius: ratio_to_f64(&radius_sq).sqrt(),
            radius_sq,
        })
    }

    /// Exact value of an eventually periodic coding.
    pub fn eval_coding(&self, c: &Coding) -> Result<GaussRational> {
        if c.period.is_empty() {
            return Err(Error::domain("coding period must be nonempty"));
        }
        if let Some(&j) = c.preperiod.iter().chain(&c.period).find(|&&j| j >= self.ell()) {
            return Err(Error::domain(format!(
                "digit index {} out of range 1..={}",
                j + 1,
                self.ell()
            )));
        }
        // periodic tail: Σ t_{k_i} β^{n−i} / (β^n − 1)
        let mut acc = GaussRational::zero();
        let beta = GaussRational::from_int(self.beta.clone());
        for &j in &c.period {
            acc = &(&acc * &beta) + &self.digits[j];
        }
        let bn = self.beta.pow(c.period.len() as u64);
        let denom = GaussRational::from_int(&bn - &GaussInteger::one());
        let mut x = acc.checked_div(&denom)?;
        for &j in c.preperiod.iter().rev() {
            x = self.apply(j, &x);
        }
        Ok(x)
    }
}

fn dimension_from_count(count: f64, depth: u32, beta: &GaussInteger) -> f64 {
    let n = beta.norm().to_f64().expect("finite norm");
    2.0 * count.ln() / (depth as f64 * n.ln())
}

pub(crate) fn ratio_to_f64(r: &Ratio<BigInt>) -> f64 {
    // scale down both parts together so huge values stay finite
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let excess = n.bits().max(d.bits()).saturating_sub(1000);
    if excess > 0 {
        n >>= excess;
        d >>= excess;
    }
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub depth: u32,
    pub distinct_maps: u64,
    pub s_n: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCover {
    pub depth: u32,
    pub count: u64,
    pub radius: f64,
    pub radius_sq: Ratio<BigInt>,
}

/// An eventually periodic word `preperiod · period^∞` of 0-based digit
/// indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coding {
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
}

impl Coding {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::domain("coding period must be nonempty"));
        }
        Ok(Coding { preperiod, period })
    }

    /// Same infinite word with the shortest period and preperiod.
    pub fn minimized(&self) -> Coding {
        let n = self.period.len();
        let root = (1..=n)
            .find(|&k| n.is_multiple_of(k) && (k..n).all(|i| self.period[i] == self.period[i - k]))
            .unwrap_or(n);
        let mut period = self.period[..root].to_vec();
        let mut preperiod = self.preperiod.clone();
        while preperiod.last().is_some() && preperiod.last() == period.last() {
            preperiod.pop();
            period.rotate_right(1);
        }
        Coding { preperiod, period }
    }

    pub fn period_length(&self) -> usize {
        self.period.len()
    }

    /// Parse `"1 2 (1 2)"`-style text with 1-based digits; the parenthesized
    /// group is the period.
    pub fn parse(text: &str) -> Result<Self> {
        let open = text
            .find('(')
            .ok_or_else(|| Error::parse(text.len(), "expected '(' before the period"))?;
        let close = text
            .rfind(')')
            .filter(|&c| c > open && text[c + 1..].trim().is_empty())
            .ok_or_else(|| Error::parse(text.len(), "expected a final ')' after the period"))?;
        let digits = |s: &str, offset: usize| -> Result<Vec<usize>> {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|w| !w.is_empty())
                .map(|w| match w.parse::<usize>() {
                    Ok(d) if d >= 1 => Ok(d - 1),
                    _ => Err(Error::parse(
                        offset + s.find(w).unwrap_or(0),
                        format!("invalid digit index {w:?}"),
                    )),
                })
                .collect()
        };
        let pre = digits(&text[..open], 0)?;
        let per = digits(&text[open + 1..close], open + 1)?;
        Coding::new(pre, per)
    }
}

impl fmt::Display for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{} ", d + 1)?;
        }
        let per: Vec<String> = self.period.iter().map(|d| (d + 1).to_string()).collect();
        write!(f, "({})", per.join(" "))
    }
}
