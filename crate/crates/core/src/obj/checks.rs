//! Exhaustive property checks over finite universes of raw objects.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{filter, meth_approx, obj_approx, rank, valid, FiniteMethod, RawObject};
use crate::sig::{Label, SignatureClosure};

type BucketKey = (SignatureClosure, Vec<Label>, Vec<Label>);

fn bucket_key(o: &RawObject) -> Option<BucketKey> {
    o.triple().map(|t| {
        (
            t.closure.clone(),
            t.fields.labels().cloned().collect(),
            t.methods.labels().cloned().collect(),
        )
    })
}

/// One component position of a bucket: the distinct values seen there and,
/// for each, the values below it.
#[derive(Debug, Default)]
struct Column {
    below: Vec<Vec<u32>>,
}

#[derive(Debug)]
struct Bucket {
    columns: Vec<Column>,
    members: BTreeMap<Vec<u32>, usize>,
    codes: Vec<(usize, Vec<u32>)>,
}

/// Finds, for any member of a universe, every member below it.
///
/// Objects with different closures or tags are unrelated unless one is
/// bottom, so members are grouped by closure and tags; inside a group the
/// order is componentwise, and each member is coded by the positions of its
/// components among the values that occur in its group.
#[derive(Debug)]
pub struct DownIndex {
    bottom: Option<usize>,
    of: Vec<Option<(usize, usize)>>,
    buckets: Vec<Bucket>,
}

impl DownIndex {
    pub fn new(universe: &[RawObject]) -> Self {
        let mut bottom = None;
        let mut groups: BTreeMap<BucketKey, Vec<usize>> = BTreeMap::new();
        for (i, o) in universe.iter().enumerate() {
            match bucket_key(o) {
                None => bottom = bottom.or(Some(i)),
                Some(k) => groups.entry(k).or_default().push(i),
            }
        }
        let mut of = vec![None; universe.len()];
        let mut buckets = Vec::new();
        for (_, idxs) in groups {
            let first = universe[idxs[0]].triple().expect("proper");
            let nf = first.fields.len();
            let nm = first.methods.len();
            let mut field_vals: Vec<Vec<RawObject>> = vec![Vec::new(); nf];
            let mut meth_vals: Vec<Vec<FiniteMethod>> = vec![Vec::new(); nm];
            let mut codes = Vec::new();
            for &i in &idxs {
                let t = universe[i].triple().expect("proper");
                let mut code = Vec::with_capacity(nf + nm);
                for (c, v) in t.fields.values().enumerate() {
                    code.push(intern(&mut field_vals[c], v));
                }
                for (c, m) in t.methods.values().enumerate() {
                    code.push(intern(&mut meth_vals[c], m));
                }
                codes.push((i, code));
            }
            let mut columns = Vec::new();
            for vals in &field_vals {
                columns.push(column(vals, obj_approx));
            }
            for vals in &meth_vals {
                columns.push(column(vals, meth_approx));
            }
            let b = buckets.len();
            let mut members = BTreeMap::new();
            for (slot, (i, code)) in codes.iter().enumerate() {
                members.entry(code.clone()).or_insert(*i);
                of[*i] = Some((b, slot));
            }
            buckets.push(Bucket {
                columns,
                members,
                codes,
            });
        }
        DownIndex {
            bottom,
            of,
            buckets,
        }
    }

    /// Indices of all members `⊑` member `i`, including `i` itself.
    pub fn below(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.bottom.into_iter().collect();
        let Some((b, slot)) = self.of[i] else {
            return out;
        };
        let bucket = &self.buckets[b];
        let code = &bucket.codes[slot].1;
        let mut partial: Vec<Vec<u32>> = vec![Vec::new()];
        for (c, &v) in code.iter().enumerate() {
            let opts = &bucket.columns[c].below[v as usize];
            let mut next = Vec::with_capacity(partial.len() * opts.len());
            for p in &partial {
                for &o in opts {
                    let mut q = p.clone();
                    q.push(o);
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial.iter().filter_map(|c| bucket.members.get(c).copied()));
        out
    }
}

fn intern<T: PartialEq + Clone>(vals: &mut Vec<T>, v: &T) -> u32 {
    match vals.iter().position(|x| x == v) {
        Some(p) => p as u32,
        None => {
            vals.push(v.clone());
            (vals.len() - 1) as u32
        }
    }
}

fn column<T>(vals: &[T], le: fn(&T, &T) -> bool) -> Column {
    let below = vals
        .iter()
        .map(|hi| {
            vals.iter()
                .enumerate()
                .filter(|(_, lo)| le(lo, hi))
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    Column { below }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProjectionProperty {
    Idempotent,
    Deflationary,
    ValidResult,
    ClosestValid,
    Monotone,
    RankNonIncreasing,
}

impl ProjectionProperty {
    pub const ALL: [ProjectionProperty; 6] = [
        ProjectionProperty::Idempotent,
        ProjectionProperty::Deflationary,
        ProjectionProperty::ValidResult,
        ProjectionProperty::ClosestValid,
        ProjectionProperty::Monotone,
        ProjectionProperty::RankNonIncreasing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProjectionProperty::Idempotent => "filter-idempotent",
            ProjectionProperty::Deflationary => "filter-deflationary",
            ProjectionProperty::ValidResult => "filter-valid",
            ProjectionProperty::ClosestValid => "filter-closest-valid",
            ProjectionProperty::Monotone => "filter-monotone",
            ProjectionProperty::RankNonIncreasing => "filter-rank-nonincreasing",
        }
    }
}

impl fmt::Display for ProjectionProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionFailure {
    pub property: ProjectionProperty,
    pub object: RawObject,
    /// The second object of a pair property.
    pub other: Option<RawObject>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectionReport {
    pub objects: usize,
    /// Ordered pairs `o' ⊑ o` inspected for the pair properties.
    pub pairs: usize,
    pub failures: Vec<ProjectionFailure>,
}

impl ProjectionReport {
    pub fn failures_of(&self, p: ProjectionProperty) -> usize {
        self.failures.iter().filter(|f| f.property == p).count()
    }
}

/// Checks over every member `o` of `universe`: `filter` is idempotent,
/// deflationary, valid-producing and does not raise rank; for every member
/// `o' ⊑ o`, `filter(o') ⊑ filter(o)`, and `o' ⊑ filter(o)` when `o'` is
/// valid.
pub fn check_finitary_projection(universe: &[RawObject]) -> ProjectionReport {
    let filtered: Vec<RawObject> = universe.iter().map(filter).collect();
    let is_valid: Vec<bool> = universe.iter().map(valid).collect();
    let index = DownIndex::new(universe);
    let mut report = ProjectionReport {
        objects: universe.len(),
        ..ProjectionReport::default()
    };
    let fail = |report: &mut ProjectionReport, property, object: &RawObject, other: Option<&RawObject>| {
        report.failures.push(ProjectionFailure {
            property,
            object: object.clone(),
            other: other.cloned(),
        })
    };
    for (i, o) in universe.iter().enumerate() {
        let f = &filtered[i];
        if &filter(f) != f {
            fail(&mut report, ProjectionProperty::Idempotent, o, None);
        }
        if !obj_approx(f, o) {
            fail(&mut report, ProjectionProperty::Deflationary, o, None);
        }
        if !valid(f) {
            fail(&mut report, ProjectionProperty::ValidResult, o, None);
        }
        if rank(f) > rank(o) {
            fail(&mut report, ProjectionProperty::RankNonIncreasing, o, None);
        }
        for j in index.below(i) {
            report.pairs += 1;
            let lo = &universe[j];
            if is_valid[j] && !obj_approx(lo, f) {
                fail(&mut report, ProjectionProperty::ClosestValid, o, Some(lo));
            }
            if !obj_approx(&filtered[j], f) {
                fail(&mut report, ProjectionProperty::Monotone, o, Some(lo));
            }
        }
    }
    report
}

/// Only the monotonicity part of [`check_finitary_projection`].
pub fn check_filter_monotone(universe: &[RawObject]) -> Vec<(RawObject, RawObject)> {
    let filtered: Vec<RawObject> = universe.iter().map(filter).collect();
    let index = DownIndex::new(universe);
    let mut out = Vec::new();
    for i in 0..universe.len() {
        for j in index.below(i) {
            if !obj_approx(&filtered[j], &filtered[i]) {
                out.push((universe[j].clone(), universe[i].clone()));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankReport {
    pub pairs: usize,
    /// Pairs `(low, high)` with `rank(low) < rank(high)` and `high ⊑ low`.
    pub counterexamples: Vec<(RawObject, RawObject)>,
}

/// For all members with `rank(o1) < rank(o2)`, checks `o2 ⋢ o1`.
///
/// Pairs with different closures or tags are decided by flatness and are
/// not visited, except that bottom is compared against everything.
pub fn check_rank_proposition(universe: &[RawObject]) -> RankReport {
    let mut report = RankReport::default();
    let mut groups: BTreeMap<BucketKey, BTreeMap<usize, Vec<&RawObject>>> = BTreeMap::new();
    let mut bottoms = Vec::new();
    for o in universe {
        match bucket_key(o) {
            None => bottoms.push(o),
            Some(k) => groups.entry(k).or_default().entry(rank(o)).or_default().push(o),
        }
    }
    for b in &bottoms {
        for o in universe.iter().filter(|o| rank(o) > 0) {
            report.pairs += 1;
            if obj_approx(o, b) {
                report.counterexamples.push(((*b).clone(), o.clone()));
            }
        }
    }
    for by_rank in groups.values() {
        let ranks: Vec<&usize> = by_rank.keys().collect();
        for (x, r1) in ranks.iter().enumerate() {
            for r2 in &ranks[x + 1..] {
                for lo in &by_rank[*r1] {
                    for hi in &by_rank[*r2] {
                        report.pairs += 1;
                        if obj_approx(hi, lo) {
                            report.counterexamples.push(((*lo).clone(), (*hi).clone()));
                        }
                    }
                }
            }
        }
    }
    report
}
