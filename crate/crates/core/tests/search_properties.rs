use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use proptest::prelude::*;

use zicantor::{
    enumerate_denominators, finiteness_search, height, is_member, members_with_denominator,
    period_height_report, GaussInteger, IfsSpec, Slot, SmoothFamily,
};

const CAP: usize = 2_000_000;

fn fam(s: &str) -> SmoothFamily {
    SmoothFamily::parse(s).unwrap()
}

/// All exponent vectors in a box, keyed by exponents, with the height
/// computed directly from the product. Odd prime powers have height at least
/// `3^e` and powers of `1+i` at least `2^(e/2)`, which sizes the box.
fn brute_denominators(family: &SmoothFamily, cap: u64) -> BTreeMap<Vec<u64>, BigInt> {
    let k = family.arity();
    let bits = 64 - u64::from(cap.leading_zeros());
    let max_e: Vec<u64> = family
        .slots()
        .iter()
        .map(|s| if matches!(s, Slot::TypeII(_)) { 2 * bits + 1 } else { bits })
        .collect();
    let mut out = BTreeMap::new();
    let mut e = vec![0u64; k];
    loop {
        let z = family.product(&e).unwrap();
        let h = height(&z);
        if h <= BigInt::from(cap) {
            out.insert(e.clone(), h);
        }
        let mut i = 0;
        while i < k && e[i] == max_e[i] {
            e[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
        e[i] += 1;
    }
}

#[test]
fn denominators_match_a_brute_force_box() {
    for (f, cap) in [("1+i", 300), ("1+i,2+i,2-i,3", 400), ("2+i,2-i,7", 500), ("1+i,1+2i,2+3i", 700)] {
        let family = fam(f);
        let got = enumerate_denominators(&family, &BigInt::from(cap)).unwrap();
        let want = brute_denominators(&family, cap);
        assert_eq!(got.len(), want.len(), "{f}");
        for d in &got {
            assert_eq!(want.get(&d.exponents), Some(&d.height));
            assert_eq!(height(&d.gamma), d.height);
            assert_eq!(family.product(&d.exponents).unwrap(), d.gamma);
        }
        let distinct: HashSet<&GaussInteger> = got.iter().map(|d| &d.gamma).collect();
        assert_eq!(distinct.len(), got.len());
    }
}

#[test]
fn found_values_are_distinct_members_with_consistent_metadata() {
    let spec = IfsSpec::parse("3", "0,2").unwrap();
    let family = fam("1+i,2+i,2-i");
    let report = finiteness_search(&spec, &family, &BigInt::from(200), CAP).unwrap();
    let values: HashSet<_> = report.found.iter().map(|f| f.value.clone()).collect();
    assert_eq!(values.len(), report.found.len());
    for f in &report.found {
        assert!(is_member(&spec, &f.value, CAP).unwrap());
        assert_eq!(height(f.value.den()), f.height);
        assert_eq!(family.product(&f.exponents).unwrap(), f.value.den().canonical());
        assert_eq!(spec.eval_coding(&f.coding).unwrap(), f.value);
        assert_eq!(f.coding, f.coding.minimized());
        assert_eq!(f.integral, f.value.is_integral());
    }
    assert_eq!(report.integral_count() + report.non_integral_count(), report.found.len());
}

#[test]
fn larger_caps_only_add_higher_values() {
    let cases = [
        ("3", "0,2", "1+i,2+i,2-i", 60),
        ("-2+i", "0,1", "1+i,3", 40),
        ("2+i", "0,1/2,i/3", "1+i,3", 30),
    ];
    for (beta, digits, f, cap) in cases {
        let spec = IfsSpec::parse(beta, digits).unwrap();
        let family = fam(f);
        let small = finiteness_search(&spec, &family, &BigInt::from(cap), CAP).unwrap();
        let big = finiteness_search(&spec, &family, &BigInt::from(4 * cap), CAP).unwrap();
        let small_values: HashSet<_> = small.values().into_iter().collect();
        let big_low: HashSet<_> = big
            .found
            .iter()
            .filter(|f| f.height <= BigInt::from(cap))
            .map(|f| f.value.clone())
            .collect();
        assert_eq!(small_values, big_low, "{beta} {digits}");
        let (_, last) = big.growth.last().unwrap();
        assert_eq!(*last, big.found.len());
        assert!(big.growth.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}

#[test]
fn every_smooth_member_below_the_cap_is_reported() {
    let spec = IfsSpec::parse("-2+i", "0,1").unwrap();
    let family = fam("1+i,3");
    let cap = BigInt::from(100);
    let report = finiteness_search(&spec, &family, &cap, CAP).unwrap();
    let found: HashSet<_> = report.values().into_iter().collect();
    for d in enumerate_denominators(&family, &cap).unwrap() {
        for m in members_with_denominator(&spec, &d.gamma, CAP).unwrap() {
            let den = m.value.den();
            if family.exponents_of(den).is_some() && height(den) <= cap {
                assert!(found.contains(&m.value), "{}", m.value);
            }
        }
    }
}

#[test]
fn period_is_a_multiple_of_the_order_when_defined() {
    let spec = IfsSpec::parse("3", "0,2").unwrap();
    let report = period_height_report(&spec, &fam("1+i,2+i,2-i"), &BigInt::from(200), CAP).unwrap();
    let checked = report.rows.iter().filter(|r| r.divides.is_some()).count();
    assert!(checked > 0);
    assert!(report.rows.iter().all(|r| r.divides != Some(false)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn denominator_heights_respect_any_cap(cap in 1u64..1000) {
        let family = fam("1+i,2+i,2-i,3");
        let got = enumerate_denominators(&family, &BigInt::from(cap)).unwrap();
        prop_assert!(got.iter().all(|d| d.height <= BigInt::from(cap)));
        prop_assert!(got.windows(2).all(|w| w[0].height <= w[1].height));
        prop_assert_eq!(got.len(), brute_denominators(&family, cap).len());
    }
}
