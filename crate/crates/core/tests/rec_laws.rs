use std::collections::BTreeMap;
use std::sync::Arc;

use noop_core::rec::{
    all_posets, check_rec_lub_preservation, check_rec_monotonic, label_at, mk_record,
    rec_approx, rec_consistent, rec_lub, record_universe, Domain, FiniteDomain, RecordFunction,
};
use noop_core::Label;
use proptest::prelude::*;

type Rec = RecordFunction<Arc<str>>;

fn posets() -> Vec<FiniteDomain> {
    (1..=4).flat_map(all_posets).collect()
}

/// A record over `d`: `None` for bottom, else a label mask over `a..c` and
/// element picks.
fn record(d: &FiniteDomain, shape: Option<(u8, [usize; 3])>) -> Rec {
    match shape {
        None => RecordFunction::Bottom,
        Some((mask, picks)) => {
            let entries: BTreeMap<Label, Arc<str>> = (0..3)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| (label_at(k as u64 + 1), d.elements()[picks[k] % d.len()].clone()))
                .collect();
            mk_record(entries)
        }
    }
}

fn shape() -> impl Strategy<Value = Option<(u8, [usize; 3])>> {
    proptest::option::weighted(0.9, (0u8..8, [0usize..4, 0usize..4, 0usize..4]))
}

proptest! {
    #[test]
    fn approx_is_a_partial_order(
        k in 0usize..24, a in shape(), b in shape(), c in shape()
    ) {
        let ps = posets();
        let d = &ps[k % ps.len()];
        let (a, b, c) = (record(d, a), record(d, b), record(d, c));
        prop_assert!(rec_approx(d, &a, &a));
        if rec_approx(d, &a, &b) && rec_approx(d, &b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if rec_approx(d, &a, &b) && rec_approx(d, &b, &c) {
            prop_assert!(rec_approx(d, &a, &c));
        }
        prop_assert!(rec_approx(d, &RecordFunction::Bottom, &a));
    }

    #[test]
    fn lub_is_least_upper_bound(
        k in 0usize..24, a in shape(), b in shape(), c in shape()
    ) {
        let ps = posets();
        let d = &ps[k % ps.len()];
        let (a, b, c) = (record(d, a), record(d, b), record(d, c));
        let consistent = rec_consistent(d, &a, &b);
        prop_assert_eq!(consistent, rec_consistent(d, &b, &a));
        match rec_lub(d, &a, &b) {
            Ok(l) => {
                prop_assert!(consistent);
                prop_assert!(rec_approx(d, &a, &l) && rec_approx(d, &b, &l));
                if rec_approx(d, &a, &c) && rec_approx(d, &b, &c) {
                    prop_assert!(rec_approx(d, &l, &c));
                }
                prop_assert_eq!(rec_lub(d, &b, &a).ok(), Some(l));
            }
            Err(_) => {
                prop_assert!(!consistent);
                // no common upper bound among the sampled records
                prop_assert!(!(rec_approx(d, &a, &c) && rec_approx(d, &b, &c)));
            }
        }
    }

    #[test]
    fn componentwise_order_matches_definition(
        k in 0usize..24, a in shape(), b in shape()
    ) {
        let ps = posets();
        let d = &ps[k % ps.len()];
        let (ra, rb) = (record(d, a), record(d, b));
        let expected = match (&ra, &rb) {
            (RecordFunction::Bottom, _) => true,
            (_, RecordFunction::Bottom) => false,
            (RecordFunction::Proper(x), RecordFunction::Proper(y)) => {
                x.tag() == y.tag()
                    && x.iter().all(|(l, v)| d.approx(v, y.get(l).unwrap()))
            }
        };
        prop_assert_eq!(rec_approx(d, &ra, &rb), expected);
    }
}

#[test]
fn monotone_over_nested_small_posets() {
    let labels: Vec<Label> = (1..=2).map(label_at).collect();
    let mut pairs = 0;
    for big in posets() {
        let names: Vec<String> = big.elements().iter().map(|e| e.to_string()).collect();
        // every subset containing the bottom
        for mask in 0u32..(1 << (names.len() - 1)) {
            let keep: Vec<&str> = std::iter::once(names[0].as_str())
                .chain(
                    names[1..]
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, n)| n.as_str()),
                )
                .collect();
            let Ok(small) = big.restrict(&keep) else { continue };
            if small.is_subdomain_of(&big).is_err() {
                continue;
            }
            for n in 0..=labels.len() {
                pairs += 1;
                let cex = check_rec_monotonic(&small, &big, &labels[..n]);
                assert!(cex.is_empty(), "{:?}", cex.first());
            }
        }
    }
    assert!(pairs > 24);
}

#[test]
fn record_universe_size() {
    // bottom plus, for each label subset, |D|^|subset| records
    let d = FiniteDomain::chain(3);
    let labels: Vec<Label> = (1..=2).map(label_at).collect();
    assert_eq!(record_universe(&d, &labels).len(), 1 + 1 + 2 * 3 + 9);
}

#[test]
fn lub_of_chains_is_preserved() {
    let labels: Vec<Label> = (1..=2).map(label_at).collect();
    let chain: Vec<FiniteDomain> = (1..=4).map(FiniteDomain::chain).collect();
    for len in 1..=4 {
        let r = check_rec_lub_preservation(&chain[..len], &labels).unwrap();
        assert!(r.is_clean(), "{r:?}");
    }
}
