//! Exhaustive checks that `L ⊸ -` is monotone in the subdomain order and
//! preserves lubs of chains, restricted to a finite label set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::finite::{DomainError, FiniteDomain, SubdomainViolation};
use super::{rec_approx, rec_consistent, rec_lub, Record, RecordFunction};
use crate::sig::Label;

type Rec = RecordFunction<Arc<str>>;

/// Every record whose tag is a subset of `labels` and whose values come
/// from `d`, plus the bottom record.
pub fn record_universe(d: &FiniteDomain, labels: &[Label]) -> BTreeSet<Rec> {
    let labels: BTreeSet<&Label> = labels.iter().collect();
    let labels: Vec<&Label> = labels.into_iter().collect();
    let mut out = BTreeSet::new();
    out.insert(RecordFunction::Bottom);
    for mask in 0u64..(1u64 << labels.len()) {
        let tag: Vec<&Label> = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| *l)
            .collect();
        let mut digits = vec![0usize; tag.len()];
        loop {
            let rec: Record<Arc<str>> = tag
                .iter()
                .zip(&digits)
                .map(|(l, &i)| ((*l).clone(), d.elements()[i].clone()))
                .collect();
            out.insert(RecordFunction::Proper(rec));
            // odometer over value choices
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] < d.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RecRelation {
    Inclusion,
    Approx,
    Consistency,
    Lub,
}

impl fmt::Display for RecRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecRelation::Inclusion => "inclusion",
            RecRelation::Approx => "approx",
            RecRelation::Consistency => "consistency",
            RecRelation::Lub => "lub",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityCounterexample {
    pub relation: RecRelation,
    pub left: Rec,
    pub right: Option<Rec>,
}

impl fmt::Display for MonotonicityCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.relation, self.left)?;
        if let Some(r) = &self.right {
            write!(f, ", {r}")?;
        }
        Ok(())
    }
}

/// Compares the record domains over `small` and `big` on all records built
/// from `small` with tags drawn from `labels`: the universe must be
/// included, and order, consistency and lubs must agree.
pub fn check_rec_monotonic(
    small: &FiniteDomain,
    big: &FiniteDomain,
    labels: &[Label],
) -> Vec<MonotonicityCounterexample> {
    let mut out = Vec::new();
    let small_recs = record_universe(small, labels);
    let big_recs = record_universe(big, labels);
    let mut shared = Vec::new();
    for r in &small_recs {
        if big_recs.contains(r) {
            shared.push(r);
        } else {
            out.push(MonotonicityCounterexample {
                relation: RecRelation::Inclusion,
                left: r.clone(),
                right: None,
            });
        }
    }
    for a in &shared {
        for b in &shared {
            let mut fail = |relation| {
                out.push(MonotonicityCounterexample {
                    relation,
                    left: (*a).clone(),
                    right: Some((*b).clone()),
                })
            };
            if rec_approx(small, a, b) != rec_approx(big, a, b) {
                fail(RecRelation::Approx);
            }
            if rec_consistent(small, a, b) != rec_consistent(big, a, b) {
                fail(RecRelation::Consistency);
            }
            if rec_lub(small, a, b) != rec_lub(big, a, b) {
                fail(RecRelation::Lub);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LubPreservationReport {
    /// Positions `i` where `chain[i]` is not a subdomain of `chain[i + 1]`.
    pub chain_violations: Vec<(usize, SubdomainViolation)>,
    pub union_size: usize,
    pub target_size: usize,
    /// Records over the union domain that no chain member produces.
    pub missing: Vec<Rec>,
    /// Records produced by the chain but not over the union domain.
    pub extra: Vec<Rec>,
    /// For every record, the first chain position whose universe holds it.
    pub first_member: BTreeMap<Rec, usize>,
}

impl LubPreservationReport {
    pub fn is_clean(&self) -> bool {
        self.chain_violations.is_empty() && self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Compares `⋃ (labels ⊸ chain[i])` with `labels ⊸ ⊔ chain`.
pub fn check_rec_lub_preservation(
    chain: &[FiniteDomain],
    labels: &[Label],
) -> Result<LubPreservationReport, DomainError> {
    let top = FiniteDomain::union(chain)?;
    let mut chain_violations = Vec::new();
    for (i, w) in chain.windows(2).enumerate() {
        if let Err(v) = w[0].is_subdomain_of(&w[1]) {
            chain_violations.push((i, v));
        }
    }
    let mut first_member = BTreeMap::new();
    for (i, d) in chain.iter().enumerate() {
        for r in record_universe(d, labels) {
            first_member.entry(r).or_insert(i);
        }
    }
    let target = record_universe(&top, labels);
    let missing = target
        .iter()
        .filter(|r| !first_member.contains_key(*r))
        .cloned()
        .collect();
    let extra = first_member
        .keys()
        .filter(|r| !target.contains(*r))
        .cloned()
        .collect();
    Ok(LubPreservationReport {
        chain_violations,
        union_size: first_member.len(),
        target_size: target.len(),
        missing,
        extra,
        first_member,
    })
}
