use std::collections::{BTreeMap, BTreeSet};

use noop_core::rec::{
    basis_element, basis_index, cantor_pair, cantor_unpair, label_at, label_index, label_seq,
    tuple_index, tuple_unindex, FiniteDomain, NatFlat, RecordFunction,
};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Walks the Cantor diagonals one step at a time.
fn oracle_unpair(z: u64) -> (u64, u64) {
    let (mut p, mut q) = (0u64, 0u64);
    for _ in 0..z {
        if p == 0 {
            p = q + 1;
            q = 0;
        } else {
            p -= 1;
            q += 1;
        }
    }
    (p, q)
}

/// Bits of `n` by repeated halving, as label indices.
fn oracle_label_seq(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut j = 1;
    while n > 0 {
        if n % 2 == 1 {
            out.push(j);
        }
        n /= 2;
        j += 1;
    }
    out
}

fn oracle_label(j: u64) -> String {
    // spreadsheet column names, lowercased
    let mut j = j;
    let mut s = Vec::new();
    while j > 0 {
        let r = (j - 1) % 26;
        s.push((b'a' + r as u8) as char);
        j = (j - 1) / 26;
    }
    s.iter().rev().collect()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn unpair_matches_diagonal_walk() {
    let mut z = 0u64;
    let (mut p, mut q) = (0u64, 0u64);
    while z <= 20_000 {
        assert_eq!(cantor_unpair(&big(z)), (big(p), big(q)));
        assert_eq!(cantor_pair(&big(p), &big(q)), big(z));
        // step the walk
        if p == 0 {
            p = q + 1;
            q = 0;
        } else {
            p -= 1;
            q += 1;
        }
        z += 1;
    }
    for z in [0u64, 1, 12, 9_999] {
        let (p, q) = oracle_unpair(z);
        assert_eq!(cantor_unpair(&big(z)), (big(p), big(q)));
    }
}

#[test]
fn label_seq_injective_with_popcount_law() {
    let mut seen = BTreeSet::new();
    for n in 0..=4096u64 {
        let s = label_seq(&big(n));
        assert_eq!(s, oracle_label_seq(n));
        assert_eq!(s.len() as u32, n.count_ones());
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(seen.insert(s));
    }
}

#[test]
fn labels_are_bijective_base_26() {
    for j in 1..=2000u64 {
        let l = label_at(j);
        assert_eq!(l.as_str(), oracle_label(j));
        assert_eq!(label_index(&l), Some(j));
    }
    assert_eq!(label_at(27).as_str(), "aa");
}

/// Decodes index `i` over a flat domain with `size` elements using only the
/// diagonal walk and halving oracles.
fn oracle_basis(i: u64, size: u64) -> Option<Option<BTreeMap<String, u64>>> {
    if i == 0 {
        return Some(None);
    }
    let (n, m) = oracle_unpair(i - 1);
    let labels = oracle_label_seq(n);
    if labels.is_empty() {
        return (m == 0).then(|| Some(BTreeMap::new()));
    }
    let mut values = vec![0u64; labels.len()];
    let mut z = m;
    for slot in (1..labels.len()).rev() {
        let (p, q) = oracle_unpair(z);
        values[slot] = q;
        z = p;
    }
    values[0] = z;
    if values.iter().any(|&v| v >= size) {
        return None;
    }
    Some(Some(
        labels
            .into_iter()
            .map(oracle_label)
            .zip(values)
            .collect(),
    ))
}

#[test]
fn basis_round_trip_over_flat_three() {
    let d = FiniteDomain::flat(3);
    let mut defined = 0;
    for i in 0..=10_000u64 {
        let r = basis_element(&big(i), &d);
        let expected = oracle_basis(i, 3);
        match (&r, &expected) {
            (None, None) => continue,
            (Some(RecordFunction::Bottom), Some(None)) => {}
            (Some(RecordFunction::Proper(rec)), Some(Some(map))) => {
                let got: BTreeMap<String, u64> = rec
                    .iter()
                    .map(|(l, v)| (l.to_string(), v[1..].parse().unwrap()))
                    .collect();
                assert_eq!(&got, map, "index {i}");
            }
            _ => panic!("index {i}: {r:?} vs {expected:?}"),
        }
        defined += 1;
        let r = r.unwrap();
        assert_eq!(basis_index(&r, &d), Some(big(i)));
    }
    assert!(defined > 100);
}

#[test]
fn basis_index_then_element_over_records() {
    // all records over the flat three-element domain with labels from a..d
    let d = FiniteDomain::flat(3);
    let labels: Vec<_> = (1..=4).map(label_at).collect();
    let mut seen = BTreeSet::new();
    for mask in 0u32..16 {
        let chosen: Vec<_> = labels
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, l)| l.clone())
            .collect();
        let mut vals = vec![0usize; chosen.len()];
        loop {
            let entries: BTreeMap<_, _> = chosen
                .iter()
                .cloned()
                .zip(vals.iter().map(|&v| d.elements()[v].clone()))
                .collect();
            let r = noop_core::rec::mk_record(entries);
            let i = basis_index(&r, &d).unwrap();
            assert_eq!(basis_element(&i, &d), Some(r));
            assert!(seen.insert(i));
            // next value vector
            let mut k = 0;
            while k < vals.len() && vals[k] == 2 {
                vals[k] = 0;
                k += 1;
            }
            if k == vals.len() {
                break;
            }
            vals[k] += 1;
        }
    }
    assert_eq!(seen.len(), (0..=4).map(|k| binom(4, k) * 3usize.pow(k as u32)).sum::<usize>());
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn flat_naturals_define_every_index_but_the_empty_tag_gap() {
    for i in 0..=10_000u64 {
        let r = basis_element(&big(i), &NatFlat);
        let (n, m) = oracle_unpair(i.saturating_sub(1));
        if i > 0 && n == 0 && m > 0 {
            assert!(r.is_none());
        } else {
            let r = r.unwrap();
            assert_eq!(basis_index(&r, &NatFlat), Some(big(i)));
        }
    }
}

proptest! {
    #[test]
    fn tuple_coding_round_trips(v in proptest::collection::vec(0u64..1_000_000, 1..6)) {
        let ns: Vec<BigUint> = v.iter().copied().map(big).collect();
        let z = tuple_index(&ns);
        prop_assert_eq!(tuple_unindex(ns.len(), &z), ns);
    }

    #[test]
    fn pair_coding_is_a_bijection_on_large_numbers(p in any::<u64>(), q in any::<u64>()) {
        let z = cantor_pair(&big(p), &big(q));
        prop_assert_eq!(cantor_unpair(&z), (big(p), big(q)));
    }
}
