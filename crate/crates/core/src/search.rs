//! Exhaustive search for Gaussian rationals in `K` whose denominators are
//! smooth over a finite prime family, and counting of lattice points in `K`.
//!
//! Each denominator is handled exactly; completeness over all exponent
//! vectors is not certified, so the search is bounded by a height cap and
//! reports whether its growth curve stabilized.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{Slot, SmoothFamily};
use crate::graph::live_graph;
use crate::height::{height, height_of_prime};
use crate::ifs::{Coding, IfsSpec};
use crate::order::{ord, LowerBoundCertificate, RootTwoRational};
use crate::{GaussInteger, GaussRational};

/// A smooth denominator with its exponent vector and height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denominator {
    pub gamma: GaussInteger,
    pub exponents: Vec<u64>,
    pub height: BigInt,
}

/// Every family product of height at most `cap`, once each, ordered by
/// height and then exponent vector.
pub fn enumerate_denominators(family: &SmoothFamily, cap: &BigInt) -> Result<Vec<Denominator>> {
    if cap < &BigInt::one() {
        return Ok(Vec::new());
    }
    // (prime height, number of exponent slots) per group
    let mut groups: Vec<(BigInt, usize, bool)> = Vec::new();
    let slots = family.slots();
    let mut i = 0;
    while i < slots.len() {
        match &slots[i] {
            Slot::TypeII(_) => {
                groups.push((BigInt::from(2), 1, true));
                i += 1;
            }
            Slot::Pair { prime, .. } => {
                groups.push((height_of_prime(prime)?, 2, false));
                i += 2;
            }
            Slot::Single(prime) => {
                groups.push((height_of_prime(prime)?, 1, false));
                i += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut exps = Vec::with_capacity(slots.len());
    walk(&groups, 0, BigInt::one(), cap, &mut exps, &mut out);

    let mut dens: Vec<Denominator> = out
        .into_iter()
        .map(|(exponents, height)| {
            let gamma = family.product(&exponents).expect("arity matches");
            Denominator {
                gamma,
                exponents,
                height,
            }
        })
        .collect();
    dens.sort_by(|a, b| (&a.height, &a.exponents).cmp(&(&b.height, &b.exponents)));
    Ok(dens)
}

fn walk(
    groups: &[(BigInt, usize, bool)],
    g: usize,
    h: BigInt,
    cap: &BigInt,
    exps: &mut Vec<u64>,
    out: &mut Vec<(Vec<u64>, BigInt)>,
) {
    let Some((p, width, ramified)) = groups.get(g) else {
        out.push((exps.clone(), h));
        return;
    };
    // height contribution of exponent e: 2^⌈e/2⌉ for 1+i, p^e otherwise
    let contribution = |e: u64| -> BigInt {
        if *ramified {
            Pow::pow(p, e.div_ceil(2))
        } else {
            Pow::pow(p, e)
        }
    };
    let mut e = 0u64;
    loop {
        let hh = &h * contribution(e);
        if &hh > cap {
            break;
        }
        if *width == 1 {
            exps.push(e);
            walk(groups, g + 1, hh, cap, exps, out);
            exps.pop();
        } else {
            // pairs (r, s) with max(r, s) = e
            for r in 0..=e {
                for s in 0..=e {
                    if r.max(s) == e {
                        exps.push(r);
                        exps.push(s);
                        walk(groups, g + 1, hh.clone(), cap, exps, out);
                        exps.pop();
                        exps.pop();
                    }
                }
            }
        }
        e += 1;
    }
}

/// A point of `K` together with a coding found by the live-graph walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub value: GaussRational,
    pub coding: Coding,
}

fn value_key(z: &GaussRational) -> (num_rational::Ratio<BigInt>, num_rational::Ratio<BigInt>) {
    z.re_im()
}

/// Every point of `K` with denominator dividing `γΓ`, with a coding each.
pub fn members_with_denominator(spec: &IfsSpec, gamma: &GaussInteger, cap: usize) -> Result<Vec<Member>> {
    let live = live_graph(spec, gamma, cap)?;
    let mut out: Vec<Member> = (0..live.len())
        .map(|i| Member {
            value: live.value(i),
            coding: live.walk_coding(i),
        })
        .collect();
    out.sort_by_key(|m| value_key(&m.value));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundRational {
    pub value: GaussRational,
    /// Exponents of the reduced denominator over the family.
    pub exponents: Vec<u64>,
    /// Height of the reduced denominator.
    pub height: BigInt,
    /// Minimized coding.
    pub coding: Coding,
    pub period_length: usize,
    pub integral: bool,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub spec: IfsSpec,
    pub family: SmoothFamily,
    pub cap: BigInt,
    /// Sorted by height, then real part, then imaginary part.
    pub found: Vec<FoundRational>,
    pub denominators_scanned: usize,
    /// `(cap c, number of found values of height ≤ c)` for `c = X/2^k`,
    /// ascending.
    pub growth: Vec<(BigInt, usize)>,
    /// The last doubling of the cap added nothing.
    pub stabilized: bool,
    pub similarity_dimension: f64,
    /// Smallest `s_n` over the composition depths tried, with its depth.
    pub best_s_n: (u32, f64),
    pub warning: Option<String>,
    /// `max_c count(c) / c^min(2s, s+1)` over the growth curve.
    pub counting_constant: f64,
}

impl SearchReport {
    pub fn integral_count(&self) -> usize {
        self.found.iter().filter(|f| f.integral).count()
    }

    pub fn non_integral_count(&self) -> usize {
        self.found.len() - self.integral_count()
    }

    pub fn values(&self) -> Vec<GaussRational> {
        self.found.iter().map(|f| f.value.clone()).collect()
    }
}

/// Depths tried for the dimension gate: `ℓⁿ` kept below this.
const GATE_BUDGET: usize = 1 << 16;

fn dimension_gate(spec: &IfsSpec, cap: usize) -> (f64, (u32, f64), Option<String>) {
    let s = spec.similarity_dimension();
    let mut best = (1u32, s);
    let mut n = 2u32;
    while n <= 32 && spec.ell().checked_pow(n).is_some_and(|w| w <= GATE_BUDGET.min(cap)) {
        if let Ok(r) = spec.compose_depth(n, cap) {
            if r.s_n < best.1 {
                best = (n, r.s_n);
            }
        }
        n += 1;
    }
    let warning = (best.1 >= 1.0).then(|| {
        format!(
            "similarity dimension {s:.6} and composed bounds are at least 1; finiteness is not expected"
        )
    });
    (s, best, warning)
}

pub fn finiteness_search(
    spec: &IfsSpec,
    family: &SmoothFamily,
    cap: &BigInt,
    node_cap: usize,
) -> Result<SearchReport> {
    family.check_coprime_to(spec.beta())?;
    let (s, best_s_n, warning) = dimension_gate(spec, node_cap);
    let dens = enumerate_denominators(family, cap)?;

    // associates of γΓ give identical graphs
    let mut seen = HashSet::new();
    let moduli: Vec<GaussInteger> = dens
        .iter()
        .map(|d| (&d.gamma * spec.gamma()).canonical())
        .filter(|m| seen.insert(m.clone()))
        .collect();
    let per_modulus: Vec<Vec<Member>> = moduli
        .par_iter()
        .map(|m| members_with_denominator(spec, &m.exact_div(spec.gamma()).expect("Γ | M"), node_cap))
        .collect::<Result<_>>()?;

    let mut values = HashSet::new();
    let mut found = Vec::new();
    for member in per_modulus.into_iter().flatten() {
        if !values.insert(member.value.clone()) {
            continue;
        }
        let den = member.value.den();
        let Some(exponents) = family.exponents_of(den) else {
            continue;
        };
        let h = height(den);
        if &h > cap {
            continue;
        }
        let coding = member.coding.minimized();
        found.push(FoundRational {
            integral: member.value.is_integral(),
            period_length: coding.period_length(),
            value: member.value,
            exponents,
            height: h,
            coding,
        });
    }
    found.sort_by(|a, b| (&a.height, value_key(&a.value)).cmp(&(&b.height, value_key(&b.value))));

    let mut caps = Vec::new();
    let mut c = cap.clone();
    while c >= BigInt::one() {
        caps.push(c.clone());
        c /= 2;
    }
    caps.reverse();
    let growth: Vec<(BigInt, usize)> = caps
        .into_iter()
        .map(|c| {
            let n = found.iter().filter(|f| f.height <= c).count();
            (c, n)
        })
        .collect();
    let stabilized = growth.len() >= 2 && growth[growth.len() - 1].1 == growth[growth.len() - 2].1;
    let exponent = (2.0 * s).min(s + 1.0);
    let counting_constant = growth
        .iter()
        .map(|(c, n)| *n as f64 / c.to_f64().unwrap_or(f64::INFINITY).powf(exponent))
        .fold(0.0, f64::max);

    Ok(SearchReport {
        spec: spec.clone(),
        family: family.clone(),
        cap: cap.clone(),
        found,
        denominators_scanned: dens.len(),
        growth,
        stabilized,
        similarity_dimension: s,
        best_s_n,
        warning,
        counting_constant,
    })
}

/// `Q_N` and `R_N` for one `N`, plus the cumulative counts over `q ≤ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub n: u64,
    /// Points of `K` in `(1/N)ℤ[i]`.
    pub q: usize,
    /// Points `ω/γ` of `K` with `H(γ) = N`; equal to `q` because
    /// `{ω/γ : H(γ) = N} = (1/N)ℤ[i]`.
    pub r: usize,
    /// Distinct points of `K` in `(1/q)ℤ[i]` for some `q ≤ N`.
    pub q_cum: usize,
    pub r_cum: usize,
}

fn lattice_points(spec: &IfsSpec, n: u64, cap: usize) -> Result<Vec<GaussRational>> {
    let big_n = GaussInteger::from_int(BigInt::from(n));
    let live = live_graph(spec, &big_n, cap)?;
    Ok(live
        .values()
        .into_iter()
        .filter(|z| big_n.is_divisible_by(z.den()))
        .collect())
}

/// `(R_N, Q_N)`.
pub fn count_lattice(spec: &IfsSpec, n: u64, cap: usize) -> Result<(usize, usize)> {
    if n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    let q = lattice_points(spec, n, cap)?.len();
    Ok((q, q))
}

#[derive(Debug, Clone)]
pub struct CountingFit {
    pub s: f64,
    pub rows: Vec<CountRow>,
    /// `max R_N / N^s` over the range.
    pub c: f64,
    /// `max R*_N / N^min(2s, s+1)` over the range.
    pub c_cum: f64,
}

/// Counting table for `N` in `lo..=hi`; cumulative counts start at `q = 1`.
pub fn counting_fit(spec: &IfsSpec, lo: u64, hi: u64, cap: usize) -> Result<CountingFit> {
    let lo = lo.max(1);
    if lo > hi {
        return Err(Error::domain("counting range is empty"));
    }
    let per_n: Vec<Vec<GaussRational>> = (1..=hi)
        .into_par_iter()
        .map(|n| lattice_points(spec, n, cap))
        .collect::<Result<_>>()?;
    let s = spec.similarity_dimension();
    let cum_exp = (2.0 * s).min(s + 1.0);
    let mut union: HashSet<GaussRational> = HashSet::new();
    let mut rows = Vec::new();
    let (mut c, mut c_cum) = (0.0f64, 0.0f64);
    for (n, pts) in (1..=hi).zip(per_n) {
        let q = pts.len();
        union.extend(pts);
        if n < lo {
            continue;
        }
        let nf = n as f64;
        c = c.max(q as f64 / nf.powf(s));
        c_cum = c_cum.max(union.len() as f64 / nf.powf(cum_exp));
        rows.push(CountRow {
            n,
            q,
            r: q,
            q_cum: union.len(),
            r_cum: union.len(),
        });
    }
    Ok(CountingFit { s, rows, c, c_cum })
}

/// One line of the period/height comparison.
#[derive(Debug, Clone)]
pub struct PeriodHeightRow {
    pub value: GaussRational,
    pub height: BigInt,
    pub period: usize,
    /// `Υ = den / gcd(den, Γ)`.
    pub reduced_denominator: GaussInteger,
    pub lower_bound: Option<RootTwoRational>,
    /// `ord(β; Υ)` when `Υ` is coprime to `β` and `Γ`.
    pub order: Option<BigUint>,
    /// Whether `ord(β; Υ)` divides the minimized period.
    pub divides: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct PeriodHeightReport {
    pub search: SearchReport,
    pub certificate: Option<LowerBoundCertificate>,
    pub rows: Vec<PeriodHeightRow>,
}

pub fn period_height_report(
    spec: &IfsSpec,
    family: &SmoothFamily,
    cap: &BigInt,
    node_cap: usize,
) -> Result<PeriodHeightReport> {
    let search = finiteness_search(spec, family, cap, node_cap)?;
    let certificate = LowerBoundCertificate::new(spec.beta(), family).ok();
    let mut rows = Vec::new();
    for f in &search.found {
        let den = f.value.den();
        let g = den.gcd(spec.gamma()).unwrap_or_else(|_| GaussInteger::one());
        let upsilon = den.exact_div(&g).expect("gcd divides").canonical();
        let hypotheses = upsilon.is_coprime(spec.beta()) && upsilon.is_coprime(spec.gamma());
        let lower_bound = match (&certificate, family.exponents_of(&upsilon)) {
            (Some(cert), Some(e)) => Some(cert.lower_bound(&e)?),
            _ => None,
        };
        let order = if hypotheses {
            Some(ord(spec.beta(), &upsilon)?)
        } else {
            None
        };
        let divides = order
            .as_ref()
            .map(|o| BigUint::from(f.period_length).is_multiple_of(o));
        rows.push(PeriodHeightRow {
            value: f.value.clone(),
            height: f.height.clone(),
            period: f.period_length,
            reduced_denominator: upsilon,
            lower_bound,
            order,
            divides,
        });
    }
    Ok(PeriodHeightReport {
        search,
        certificate,
        rows,
    })
}
