//! Effective presentation of the finite records: label sequences from binary
//! expansions, Cantor tuple coding, and the basis `r_0, r_1, ...`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{EffectiveDomain, Record, RecordFunction};
use crate::sig::Label;

/// The `j`-th label of the fixed universe `a, b, ..., z, aa, ab, ...`
/// (bijective base 26, `j ≥ 1`).
pub fn label_at(j: u64) -> Label {
    assert!(j >= 1, "label indices start at 1");
    let mut j = j;
    let mut bytes = Vec::new();
    while j > 0 {
        j -= 1;
        bytes.push(b'a' + (j % 26) as u8);
        j /= 26;
    }
    bytes.reverse();
    let text = String::from_utf8(bytes).expect("ascii");
    Label::new(&text).expect("lowercase letters form an identifier")
}

/// Inverse of [`label_at`]; `None` for labels outside the universe.
pub fn label_index(label: &Label) -> Option<u64> {
    let mut j: u64 = 0;
    for c in label.as_str().bytes() {
        if !c.is_ascii_lowercase() {
            return None;
        }
        j = j.checked_mul(26)?.checked_add(u64::from(c - b'a' + 1))?;
    }
    Some(j)
}

/// Label indices `j_1 < ... < j_k` with `2n = Σ 2^{j_i}`.
pub fn label_seq(n: &BigUint) -> Vec<u64> {
    (0..n.bits()).filter(|&b| n.bit(b)).map(|b| b + 1).collect()
}

pub fn cantor_pair(p: &BigUint, q: &BigUint) -> BigUint {
    let s = p + q;
    (&s * (&s + 1u32)) / 2u32 + q
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let q = z - t;
    let p = w - &q;
    (p, q)
}

/// `π^k`, folding pairs from the left; a single number codes itself.
pub fn tuple_index(ns: &[BigUint]) -> BigUint {
    let (first, rest) = ns.split_first().expect("tuple_index needs k >= 1");
    rest.iter()
        .fold(first.clone(), |acc, n| cantor_pair(&acc, n))
}

pub fn tuple_unindex(k: usize, z: &BigUint) -> Vec<BigUint> {
    assert!(k >= 1, "tuple_unindex needs k >= 1");
    let mut out = vec![BigUint::zero(); k];
    let mut z = z.clone();
    for slot in out[1..].iter_mut().rev() {
        let (p, q) = cantor_unpair(&z);
        *slot = q;
        z = p;
    }
    out[0] = z;
    out
}

/// `r_i`. `None` where the element domain has no element at a needed
/// index, and for `n = 0, m > 0` since the only zero-length tuple is index 0.
pub fn basis_element<D: EffectiveDomain>(i: &BigUint, d: &D) -> Option<RecordFunction<D::Elem>> {
    if i.is_zero() {
        return Some(RecordFunction::Bottom);
    }
    let (n, m) = cantor_unpair(&(i - 1u32));
    let labels = label_seq(&n);
    if labels.is_empty() {
        return m.is_zero().then(|| RecordFunction::Proper(Record::empty()));
    }
    let values = tuple_unindex(labels.len(), &m);
    let mut entries = BTreeMap::new();
    for (j, v) in labels.into_iter().zip(values) {
        entries.insert(label_at(j), d.enumerate(&v)?);
    }
    Some(RecordFunction::Proper(Record::new(entries)))
}

/// The index of a record in the basis; `None` when a label lies outside the
/// universe or a value is not enumerated by `d`.
pub fn basis_index<D: EffectiveDomain>(r: &RecordFunction<D::Elem>, d: &D) -> Option<BigUint> {
    let r = match r {
        RecordFunction::Bottom => return Some(BigUint::zero()),
        RecordFunction::Proper(r) => r,
    };
    // label order and index order agree only within one length, so sort
    // by index explicitly
    let mut coded = Vec::with_capacity(r.len());
    for (l, v) in r.iter() {
        coded.push((label_index(l)?, d.index_of(v)?));
    }
    coded.sort_by_key(|(j, _)| *j);
    let mut n = BigUint::zero();
    for (j, _) in &coded {
        n.set_bit(j - 1, true);
    }
    let m = if coded.is_empty() {
        BigUint::zero()
    } else {
        let values: Vec<BigUint> = coded.into_iter().map(|(_, v)| v).collect();
        tuple_index(&values)
    };
    Some(cantor_pair(&n, &m) + BigUint::one())
}
