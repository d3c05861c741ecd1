//! The record constructor `L ⊸ D` over an abstract element domain.

use alloc::collections::{BTreeMap, BTreeSet};
use core::fmt;

use crate::sig::Label;

mod continuity;
mod enumerate;
mod finite;

pub use continuity::{
    check_rec_lub_preservation, check_rec_monotonic, record_universe, LubPreservationReport,
    MonotonicityCounterexample, RecRelation,
};
pub use enumerate::{
    basis_element, basis_index, cantor_pair, cantor_unpair, label_at, label_index, label_seq,
    tuple_index, tuple_unindex,
};
pub use finite::{all_posets, DomainError, FiniteDomain, Nat, NatFlat, SubdomainViolation};

/// A domain whose order, consistency and lubs are decidable.
pub trait Domain {
    type Elem: Clone + Ord + fmt::Debug;

    fn bottom(&self) -> Self::Elem;
    fn approx(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn consistent(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// Defined exactly when `consistent(a, b)`.
    fn lub(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

/// A domain with an effective presentation of its finite elements.
/// `enumerate(0)` is bottom. Both maps are partial when the universe is
/// finite.
pub trait EffectiveDomain: Domain {
    fn enumerate(&self, index: &num_bigint::BigUint) -> Option<Self::Elem>;
    fn index_of(&self, elem: &Self::Elem) -> Option<num_bigint::BigUint>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent;

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("elements are inconsistent and have no lub")
    }
}

/// A proper record: a finite map whose key set is its tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Record<E> {
    entries: BTreeMap<Label, E>,
}

impl<E> Default for Record<E> {
    fn default() -> Self {
        Record {
            entries: BTreeMap::new(),
        }
    }
}

impl<E> Record<E> {
    pub fn new(entries: BTreeMap<Label, E>) -> Self {
        Record { entries }
    }

    pub fn empty() -> Self {
        Record::default()
    }

    pub fn tag(&self) -> BTreeSet<Label> {
        self.entries.keys().cloned().collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.entries.keys()
    }

    pub fn same_tag<F>(&self, other: &Record<F>) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.keys().zip(other.entries.keys()).all(|(a, b)| a == b)
    }

    pub fn get(&self, label: &Label) -> Option<&E> {
        self.entries.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &E)> {
        self.entries.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &E> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_entries(self) -> BTreeMap<Label, E> {
        self.entries
    }

    /// Applies `f` to every value, keeping the tag.
    pub fn map<F, G: FnMut(&E) -> F>(&self, mut f: G) -> Record<F> {
        Record {
            entries: self.entries.iter().map(|(l, v)| (l.clone(), f(v))).collect(),
        }
    }

    pub fn approx<D: Domain<Elem = E>>(&self, d: &D, other: &Record<E>) -> bool {
        self.same_tag(other)
            && self
                .entries
                .values()
                .zip(other.entries.values())
                .all(|(a, b)| d.approx(a, b))
    }

    pub fn consistent<D: Domain<Elem = E>>(&self, d: &D, other: &Record<E>) -> bool {
        self.same_tag(other)
            && self
                .entries
                .values()
                .zip(other.entries.values())
                .all(|(a, b)| d.consistent(a, b))
    }

    pub fn lub<D: Domain<Elem = E>>(&self, d: &D, other: &Record<E>) -> Option<Record<E>> {
        if !self.same_tag(other) {
            return None;
        }
        let mut entries = BTreeMap::new();
        for ((l, a), b) in self.entries.iter().zip(other.entries.values()) {
            entries.insert(l.clone(), d.lub(a, b)?);
        }
        Some(Record { entries })
    }
}

impl<E> FromIterator<(Label, E)> for Record<E> {
    fn from_iter<I: IntoIterator<Item = (Label, E)>>(iter: I) -> Self {
        Record {
            entries: iter.into_iter().collect(),
        }
    }
}

impl<E: fmt::Display> fmt::Display for Record<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}:{v}")?;
        }
        f.write_str("}")
    }
}

/// An element of `L ⊸ D`: the bottom record or a proper record. The strict
/// pair mapping the bottom label to the bottom element is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecordFunction<E> {
    Bottom,
    Proper(Record<E>),
}

/// A proper record with tag equal to the key set of `bindings`.
pub fn mk_record<E>(bindings: BTreeMap<Label, E>) -> RecordFunction<E> {
    RecordFunction::Proper(Record::new(bindings))
}

impl<E> RecordFunction<E> {
    pub fn is_bottom(&self) -> bool {
        matches!(self, RecordFunction::Bottom)
    }

    pub fn proper(&self) -> Option<&Record<E>> {
        match self {
            RecordFunction::Bottom => None,
            RecordFunction::Proper(r) => Some(r),
        }
    }
}

impl<E: fmt::Display> fmt::Display for RecordFunction<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordFunction::Bottom => f.write_str("⊥"),
            RecordFunction::Proper(r) => write!(f, "{r}"),
        }
    }
}

pub fn rec_approx<D: Domain>(
    d: &D,
    r1: &RecordFunction<D::Elem>,
    r2: &RecordFunction<D::Elem>,
) -> bool {
    match (r1, r2) {
        (RecordFunction::Bottom, _) => true,
        (_, RecordFunction::Bottom) => false,
        (RecordFunction::Proper(a), RecordFunction::Proper(b)) => a.approx(d, b),
    }
}

pub fn rec_consistent<D: Domain>(
    d: &D,
    r1: &RecordFunction<D::Elem>,
    r2: &RecordFunction<D::Elem>,
) -> bool {
    match (r1, r2) {
        (RecordFunction::Bottom, _) | (_, RecordFunction::Bottom) => true,
        (RecordFunction::Proper(a), RecordFunction::Proper(b)) => a.consistent(d, b),
    }
}

pub fn rec_lub<D: Domain>(
    d: &D,
    r1: &RecordFunction<D::Elem>,
    r2: &RecordFunction<D::Elem>,
) -> Result<RecordFunction<D::Elem>, Inconsistent> {
    match (r1, r2) {
        (RecordFunction::Bottom, r) | (r, RecordFunction::Bottom) => Ok(r.clone()),
        (RecordFunction::Proper(a), RecordFunction::Proper(b)) => a
            .lub(d, b)
            .map(RecordFunction::Proper)
            .ok_or(Inconsistent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::sync::Arc;
    use alloc::vec::Vec;

    fn lb(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    fn rec(d: &FiniteDomain, pairs: &[(&str, &str)]) -> RecordFunction<Arc<str>> {
        mk_record(
            pairs
                .iter()
                .map(|(l, v)| (lb(l), d.elem(v).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn empty_record_is_not_bottom() {
        let d = FiniteDomain::flat(3);
        let e = mk_record::<Arc<str>>(BTreeMap::new());
        assert!(!e.is_bottom());
        assert!(rec_approx(&d, &RecordFunction::Bottom, &e));
        assert!(!rec_approx(&d, &e, &RecordFunction::Bottom));
        assert_eq!(e.to_string(), "{}");
    }

    #[test]
    fn bottom_valued_record_differs_from_bottom() {
        let d = FiniteDomain::flat(3);
        let r = rec(&d, &[("x", "d0")]);
        assert_ne!(r, RecordFunction::Bottom);
        assert_eq!(r.proper().unwrap().tag().len(), 1);
    }

    #[test]
    fn unequal_tags_are_unrelated() {
        let d = FiniteDomain::flat(3);
        let x = rec(&d, &[("x", "d0")]);
        let xy = rec(&d, &[("x", "d0"), ("y", "d0")]);
        assert!(!rec_approx(&d, &x, &xy));
        assert!(!rec_approx(&d, &xy, &x));
        assert!(!rec_consistent(&d, &x, &xy));
        assert_eq!(rec_lub(&d, &x, &xy), Err(Inconsistent));
    }

    #[test]
    fn componentwise_order_and_lub() {
        let d = FiniteDomain::flat(3);
        let lo = rec(&d, &[("x", "d0"), ("y", "d2")]);
        let hi = rec(&d, &[("x", "d1"), ("y", "d2")]);
        let other = rec(&d, &[("x", "d2"), ("y", "d0")]);
        assert!(rec_approx(&d, &lo, &hi));
        assert!(!rec_approx(&d, &hi, &lo));
        assert!(!rec_consistent(&d, &hi, &other));
        let up = rec_lub(&d, &lo, &other).unwrap();
        assert_eq!(up, rec(&d, &[("x", "d2"), ("y", "d2")]));
        assert_eq!(rec_lub(&d, &hi, &RecordFunction::Bottom).unwrap(), hi);
        assert_eq!(up.to_string(), "{x:d2, y:d2}");
    }

    #[test]
    fn laws_over_a_small_universe() {
        let d = FiniteDomain::from_covers(
            &["d0", "d1", "d2", "d3"],
            &[("d0", "d1"), ("d0", "d2"), ("d1", "d3"), ("d2", "d3")],
        )
        .unwrap();
        let labels = [lb("a"), lb("b")];
        let all: Vec<_> = record_universe(&d, &labels).into_iter().collect();
        for a in &all {
            assert!(rec_approx(&d, a, a));
            assert!(rec_approx(&d, &RecordFunction::Bottom, a));
            for b in &all {
                if rec_approx(&d, a, b) && rec_approx(&d, b, a) {
                    assert_eq!(a, b);
                }
                let lub = rec_lub(&d, a, b);
                assert_eq!(lub.is_ok(), rec_consistent(&d, a, b));
                if let Ok(u) = lub {
                    assert!(rec_approx(&d, a, &u) && rec_approx(&d, b, &u));
                    for c in &all {
                        if rec_approx(&d, a, c) && rec_approx(&d, b, c) {
                            assert!(rec_approx(&d, &u, c));
                        }
                        if rec_approx(&d, a, b) && rec_approx(&d, b, c) {
                            assert!(rec_approx(&d, a, c));
                        }
                    }
                }
            }
        }
    }
}
