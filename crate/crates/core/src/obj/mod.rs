//! Raw objects: triples of a signature closure, a field record and a method
//! record, with methods as finite step tables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::rec::{Domain, Record, RecordFunction};
use crate::sig::SignatureClosure;

mod checks;
mod filter;
mod universe;
mod valid;

pub use checks::{
    check_filter_monotone, check_finitary_projection, check_rank_proposition, DownIndex,
    ProjectionFailure, ProjectionProperty, ProjectionReport, RankReport,
};
pub use filter::{filter, filter_meth_sig, filter_obj_sig, method_closures, minimal_valid_above};
pub use universe::{
    arg_sequences, method_tables, raw_universe, shape_variants, BudgetExceeded, UniverseConfig,
};
pub use valid::{valid, validate, Clause, PathStep, Violation};

/// An element of the raw object domain. Cloning is cheap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RawObject {
    Bottom,
    Obj(Arc<Triple>),
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub closure: SignatureClosure,
    pub fields: Record<RawObject>,
    pub methods: Record<FiniteMethod>,
}

impl RawObject {
    pub fn new(
        closure: SignatureClosure,
        fields: Record<RawObject>,
        methods: Record<FiniteMethod>,
    ) -> Self {
        RawObject::Obj(Arc::new(Triple {
            closure,
            fields,
            methods,
        }))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, RawObject::Bottom)
    }

    pub fn triple(&self) -> Option<&Triple> {
        match self {
            RawObject::Bottom => None,
            RawObject::Obj(t) => Some(t),
        }
    }

    pub fn closure(&self) -> Option<&SignatureClosure> {
        self.triple().map(|t| &t.closure)
    }
}

/// Builds a triple under the smash product: a missing closure or a bottom
/// record collapses the whole object to bottom.
pub fn mk_object(
    closure: Option<SignatureClosure>,
    fields: RecordFunction<RawObject>,
    methods: RecordFunction<FiniteMethod>,
) -> RawObject {
    match (closure, fields, methods) {
        (Some(c), RecordFunction::Proper(f), RecordFunction::Proper(m)) => RawObject::new(c, f, m),
        _ => RawObject::Bottom,
    }
}

/// The object of `sc` with every field bound to bottom and every method to
/// the bottom method.
pub fn witness(sc: &SignatureClosure) -> RawObject {
    let sig = sc.root();
    RawObject::new(
        sc.clone(),
        sig.fields()
            .iter()
            .map(|f| (f.name.clone(), RawObject::Bottom))
            .collect(),
        sig.methods()
            .iter()
            .map(|m| (m.name.clone(), FiniteMethod::bottom()))
            .collect(),
    )
}

/// One entry `args ↘ result` of a step table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub args: Vec<RawObject>,
    pub result: RawObject,
}

impl Step {
    pub fn new(args: Vec<RawObject>, result: RawObject) -> Self {
        Step { args, result }
    }
}

/// A finite element of the strict function space, as a step table in
/// canonical form: each argument is a point where the function's value
/// rises above what smaller arguments in the table give, results are the
/// function's value there, and steps are sorted. Structural equality is
/// therefore extensional equality. The empty table is the bottom method.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteMethod {
    steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MethodError {
    ArityMismatch { expected: usize, found: usize },
    /// Steps whose arguments share an upper bound have no common result.
    Inconsistent,
}

impl fmt::Display for MethodError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodError::ArityMismatch { expected, found } => {
                write!(f, "step of arity {found} where {expected} was expected")
            }
            MethodError::Inconsistent => f.write_str("steps do not form a consistent table"),
        }
    }
}

impl FiniteMethod {
    pub fn bottom() -> Self {
        FiniteMethod::default()
    }

    pub fn is_bottom(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn arity(&self) -> Option<usize> {
        self.steps.first().map(|s| s.args.len())
    }

    /// The join of the given step functions, in canonical form.
    pub fn from_steps<I: IntoIterator<Item = Step>>(steps: I) -> Result<Self, MethodError> {
        let steps: Vec<Step> = steps.into_iter().collect();
        if let Some(first) = steps.first() {
            let expected = first.args.len();
            if let Some(bad) = steps.iter().find(|s| s.args.len() != expected) {
                return Err(MethodError::ArityMismatch {
                    expected,
                    found: bad.args.len(),
                });
            }
        }
        let steps: Vec<Step> = steps.into_iter().filter(|s| !s.result.is_bottom()).collect();
        if steps.is_empty() {
            return Ok(FiniteMethod::bottom());
        }

        // value at every lub of arguments; failure here is joint
        // inconsistency
        let points = lub_closure(steps.iter().map(|s| s.args.clone()));
        let mut value: BTreeMap<&Vec<RawObject>, RawObject> = BTreeMap::new();
        for p in &points {
            let mut acc = RawObject::Bottom;
            for s in steps.iter().filter(|s| seq_approx(&s.args, p)) {
                acc = obj_lub(&acc, &s.result).ok_or(MethodError::Inconsistent)?;
            }
            value.insert(p, acc);
        }

        let args: BTreeSet<&Vec<RawObject>> = steps.iter().map(|s| &s.args).collect();
        let mut canonical = Vec::new();
        for a in &args {
            let v = &value[*a];
            if v.is_bottom() {
                continue;
            }
            let mut below = RawObject::Bottom;
            for b in args.iter().filter(|b| *b != a && seq_approx(b, a)) {
                below = obj_lub(&below, &value[*b]).expect("values below a point are consistent");
            }
            if &below != v {
                canonical.push(Step::new((*a).clone(), v.clone()));
            }
        }
        Ok(FiniteMethod { steps: canonical })
    }

    /// Lub of the results of all steps whose arguments lie below `args`.
    pub fn apply(&self, args: &[RawObject]) -> RawObject {
        let mut acc = RawObject::Bottom;
        for s in self.steps.iter().filter(|s| seq_approx(&s.args, args)) {
            acc = obj_lub(&acc, &s.result).expect("tables are jointly consistent");
        }
        acc
    }

    /// Application to an element of the sequence domain; strict in the
    /// bottom sequence.
    pub fn apply_seq(&self, seq: &ObjSequence) -> RawObject {
        match seq {
            ObjSequence::BottomSeq => RawObject::Bottom,
            ObjSequence::Seq(s) => self.apply(s),
        }
    }
}

/// Element of the finite-sequence domain. Sequences of different lengths
/// are unrelated; only `BottomSeq` is below everything.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjSequence {
    BottomSeq,
    Seq(Vec<RawObject>),
}

impl ObjSequence {
    pub fn approx(&self, other: &ObjSequence) -> bool {
        match (self, other) {
            (ObjSequence::BottomSeq, _) => true,
            (_, ObjSequence::BottomSeq) => false,
            (ObjSequence::Seq(a), ObjSequence::Seq(b)) => seq_approx(a, b),
        }
    }

    pub fn lub(&self, other: &ObjSequence) -> Option<ObjSequence> {
        match (self, other) {
            (ObjSequence::BottomSeq, s) | (s, ObjSequence::BottomSeq) => Some(s.clone()),
            (ObjSequence::Seq(a), ObjSequence::Seq(b)) => seq_lub(a, b).map(ObjSequence::Seq),
        }
    }
}

pub fn seq_approx(a: &[RawObject], b: &[RawObject]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| obj_approx(x, y))
}

pub fn seq_lub(a: &[RawObject], b: &[RawObject]) -> Option<Vec<RawObject>> {
    if a.len() != b.len() {
        return None;
    }
    a.iter().zip(b).map(|(x, y)| obj_lub(x, y)).collect()
}

/// Closes a set of sequences under lubs of consistent pairs.
pub(crate) fn lub_closure<I>(seqs: I) -> BTreeSet<Vec<RawObject>>
where
    I: IntoIterator<Item = Vec<RawObject>>,
{
    let mut all: BTreeSet<Vec<RawObject>> = seqs.into_iter().collect();
    let mut frontier: Vec<Vec<RawObject>> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for a in &all {
                if let Some(l) = seq_lub(f, a) {
                    if !all.contains(&l) && !next.contains(&l) {
                        next.push(l);
                    }
                }
            }
        }
        for n in &next {
            all.insert(n.clone());
        }
        frontier = next;
    }
    all
}

pub fn obj_approx(a: &RawObject, b: &RawObject) -> bool {
    match (a, b) {
        (RawObject::Bottom, _) => true,
        (_, RawObject::Bottom) => false,
        (RawObject::Obj(x), RawObject::Obj(y)) => {
            Arc::ptr_eq(x, y)
                || (x.closure == y.closure
                    && x.fields.approx(&ObjDomain, &y.fields)
                    && x.methods.approx(&MethodDomain, &y.methods))
        }
    }
}

pub fn obj_consistent(a: &RawObject, b: &RawObject) -> bool {
    obj_lub(a, b).is_some()
}

pub fn obj_lub(a: &RawObject, b: &RawObject) -> Option<RawObject> {
    match (a, b) {
        (RawObject::Bottom, o) | (o, RawObject::Bottom) => Some(o.clone()),
        (RawObject::Obj(x), RawObject::Obj(y)) => {
            if Arc::ptr_eq(x, y) {
                return Some(a.clone());
            }
            if x.closure != y.closure {
                return None;
            }
            let fields = x.fields.lub(&ObjDomain, &y.fields)?;
            let methods = x.methods.lub(&MethodDomain, &y.methods)?;
            Some(RawObject::new(x.closure.clone(), fields, methods))
        }
    }
}

/// `m1 ⊑ m2` iff every step of `m1` is dominated by `m2` at its argument.
pub fn meth_approx(m1: &FiniteMethod, m2: &FiniteMethod) -> bool {
    m1.steps
        .iter()
        .all(|s| obj_approx(&s.result, &m2.apply(&s.args)))
}

pub fn meth_lub(m1: &FiniteMethod, m2: &FiniteMethod) -> Option<FiniteMethod> {
    if m1.is_bottom() {
        return Some(m2.clone());
    }
    if m2.is_bottom() || m1 == m2 {
        return Some(m1.clone());
    }
    FiniteMethod::from_steps(m1.steps.iter().chain(&m2.steps).cloned()).ok()
}

pub fn meth_consistent(m1: &FiniteMethod, m2: &FiniteMethod) -> bool {
    meth_lub(m1, m2).is_some()
}

/// The raw object domain as a [`Domain`], for use with records.
#[derive(Debug, Clone, Copy, Default)]
pub struct ObjDomain;

impl Domain for ObjDomain {
    type Elem = RawObject;

    fn bottom(&self) -> RawObject {
        RawObject::Bottom
    }

    fn approx(&self, a: &RawObject, b: &RawObject) -> bool {
        obj_approx(a, b)
    }

    fn consistent(&self, a: &RawObject, b: &RawObject) -> bool {
        obj_consistent(a, b)
    }

    fn lub(&self, a: &RawObject, b: &RawObject) -> Option<RawObject> {
        obj_lub(a, b)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MethodDomain;

impl Domain for MethodDomain {
    type Elem = FiniteMethod;

    fn bottom(&self) -> FiniteMethod {
        FiniteMethod::bottom()
    }

    fn approx(&self, a: &FiniteMethod, b: &FiniteMethod) -> bool {
        meth_approx(a, b)
    }

    fn consistent(&self, a: &FiniteMethod, b: &FiniteMethod) -> bool {
        meth_consistent(a, b)
    }

    fn lub(&self, a: &FiniteMethod, b: &FiniteMethod) -> Option<FiniteMethod> {
        meth_lub(a, b)
    }
}

/// Nesting depth through field values and method results. Step arguments
/// do not count; see the rank proposition check.
pub fn rank(o: &RawObject) -> usize {
    match o {
        RawObject::Bottom => 0,
        RawObject::Obj(t) => {
            let fields = t.fields.values().map(rank);
            let results = t
                .methods
                .values()
                .flat_map(|m| m.steps.iter().map(|s| rank(&s.result)));
            1 + fields.chain(results).max().unwrap_or(0)
        }
    }
}

impl fmt::Display for RawObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawObject::Bottom => f.write_str("⊥"),
            RawObject::Obj(t) => {
                write!(f, "(obj {} (fields", t.closure.root_name())?;
                for (l, v) in t.fields.iter() {
                    write!(f, " ({l} {v})")?;
                }
                f.write_str(") (methods")?;
                for (l, m) in t.methods.iter() {
                    write!(f, " ({l} {m})")?;
                }
                f.write_str("))")
            }
        }
    }
}

impl fmt::Display for FiniteMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("⊥M");
        }
        f.write_str("(steps")?;
        for s in &self.steps {
            f.write_str(" (step (args")?;
            for a in &s.args {
                write!(f, " {a}")?;
            }
            write!(f, ") {})", s.result)?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::sig::Label;
    use alloc::string::ToString;
    use alloc::vec;

    pub(crate) fn lb(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    /// `(Object, {}, {equals ↦ m})`
    pub(crate) fn obj_with_equals(m: FiniteMethod) -> RawObject {
        RawObject::new(obj_sig_clos(), Record::empty(), [(lb("equals"), m)].into_iter().collect())
    }

    pub(crate) fn pair(first: RawObject, second: RawObject) -> RawObject {
        RawObject::new(
            pair_sig_clos(),
            [(lb("first"), first), (lb("second"), second)].into_iter().collect(),
            [(lb("equals"), FiniteMethod::bottom()), (lb("swap"), FiniteMethod::bottom())]
                .into_iter()
                .collect(),
        )
    }

    fn step(args: Vec<RawObject>, result: RawObject) -> Step {
        Step::new(args, result)
    }

    #[test]
    fn smash_collapse() {
        let w = witness(&pair_sig_clos());
        let t = w.triple().unwrap();
        assert_eq!(
            mk_object(Some(pair_sig_clos()), RecordFunction::Bottom, RecordFunction::Proper(t.methods.clone())),
            RawObject::Bottom
        );
        assert_eq!(
            mk_object(None, RecordFunction::Proper(t.fields.clone()), RecordFunction::Proper(t.methods.clone())),
            RawObject::Bottom
        );
        let o = mk_object(
            Some(pair_sig_clos()),
            RecordFunction::Proper(t.fields.clone()),
            RecordFunction::Proper(t.methods.clone()),
        );
        assert_eq!(o, w);
        assert!(!o.is_bottom());
    }

    #[test]
    fn witness_shape_and_rank() {
        let w = witness(&obj_sig_clos());
        assert_eq!(w.to_string(), "(obj Object (fields) (methods (equals ⊥M)))");
        let p = witness(&pair_sig_clos());
        assert_eq!(
            p.triple().unwrap().fields.tag().into_iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            vec!["first", "second"]
        );
        assert_eq!(rank(&RawObject::Bottom), 0);
        assert_eq!(rank(&w), 1);
        assert_eq!(rank(&pair(w.clone(), RawObject::Bottom)), 2);
    }

    #[test]
    fn ordering_is_componentwise_and_flat_in_closures() {
        let w = witness(&obj_sig_clos());
        let lo = pair(RawObject::Bottom, RawObject::Bottom);
        let hi = pair(w.clone(), RawObject::Bottom);
        assert!(obj_approx(&RawObject::Bottom, &hi));
        assert!(obj_approx(&lo, &hi));
        assert!(!obj_approx(&hi, &lo));
        let as_obj = RawObject::new(
            obj_sig_clos(),
            Record::empty(),
            [(lb("equals"), FiniteMethod::bottom())].into_iter().collect(),
        );
        let as_bool = RawObject::new(
            bool_sig_clos(),
            Record::empty(),
            [(lb("equals"), FiniteMethod::bottom())].into_iter().collect(),
        );
        assert!(!obj_approx(&as_obj, &as_bool) && !obj_approx(&as_bool, &as_obj));
        assert!(!obj_consistent(&as_obj, &as_bool));
        let other = pair(RawObject::Bottom, w.clone());
        assert_eq!(obj_lub(&hi, &other), Some(pair(w.clone(), w)));
    }

    #[test]
    fn canonical_tables() {
        let wo = witness(&obj_sig_clos());
        let wb = witness(&bool_sig_clos());
        // a step below another with the same result is redundant
        let m = FiniteMethod::from_steps(vec![
            step(vec![RawObject::Bottom, RawObject::Bottom], wb.clone()),
            step(vec![RawObject::Bottom, wo.clone()], wb.clone()),
        ])
        .unwrap();
        assert_eq!(m.steps().len(), 1);
        assert_eq!(m.steps()[0].args, vec![RawObject::Bottom, RawObject::Bottom]);
        // bottom results vanish
        let m = FiniteMethod::from_steps(vec![step(vec![wo.clone()], RawObject::Bottom)]).unwrap();
        assert!(m.is_bottom());
        // order of steps does not matter
        let a = step(vec![wo.clone(), RawObject::Bottom], wb.clone());
        let b = step(vec![RawObject::Bottom, wo.clone()], wb.clone());
        assert_eq!(
            FiniteMethod::from_steps(vec![a.clone(), b.clone()]),
            FiniteMethod::from_steps(vec![b, a])
        );
        assert_eq!(
            FiniteMethod::from_steps(vec![step(vec![wo.clone()], wb.clone()), step(vec![], wb.clone())]),
            Err(MethodError::ArityMismatch { expected: 1, found: 0 })
        );
    }

    #[test]
    fn inconsistent_tables_are_rejected() {
        let wo = witness(&obj_sig_clos());
        let wb = witness(&bool_sig_clos());
        // both steps apply at [wo]
        let r = FiniteMethod::from_steps(vec![
            step(vec![RawObject::Bottom], wo.clone()),
            step(vec![wo.clone()], wb.clone()),
        ]);
        assert_eq!(r, Err(MethodError::Inconsistent));
        // incomparable arguments with no common upper bound are fine
        let r = FiniteMethod::from_steps(vec![
            step(vec![wb.clone()], wo.clone()),
            step(vec![wo.clone()], wb.clone()),
        ]);
        assert_eq!(r.unwrap().steps().len(), 2);
    }

    #[test]
    fn application_and_method_order() {
        let wo = witness(&obj_sig_clos());
        let wb = witness(&bool_sig_clos());
        let m = FiniteMethod::from_steps(vec![step(vec![RawObject::Bottom, wo.clone()], wb.clone())]).unwrap();
        assert_eq!(m.apply(&[RawObject::Bottom, wo.clone()]), wb);
        assert_eq!(m.apply(&[RawObject::Bottom, RawObject::Bottom]), RawObject::Bottom);
        assert_eq!(m.apply(&[wo.clone()]), RawObject::Bottom);
        assert_eq!(m.apply_seq(&ObjSequence::BottomSeq), RawObject::Bottom);
        let wider = FiniteMethod::from_steps(vec![step(vec![RawObject::Bottom, RawObject::Bottom], wb.clone())]).unwrap();
        assert!(meth_approx(&m, &wider));
        assert!(!meth_approx(&wider, &m));
        assert!(meth_approx(&FiniteMethod::bottom(), &m));
        assert_eq!(meth_lub(&m, &wider), Some(wider.clone()));
    }

    #[test]
    fn rank_ignores_arguments() {
        // an argument of rank 2 does not raise the rank
        let wo = witness(&obj_sig_clos());
        let wb = witness(&bool_sig_clos());
        let deep = pair(wo.clone(), RawObject::Bottom);
        let m = FiniteMethod::from_steps(vec![step(vec![RawObject::Bottom, deep], wb.clone())]).unwrap();
        let o1 = obj_with_equals(m);
        let m2 = FiniteMethod::from_steps(vec![step(vec![RawObject::Bottom, RawObject::Bottom], wb)]).unwrap();
        let o2 = obj_with_equals(m2);
        assert!(obj_approx(&o1, &o2));
        assert_eq!(rank(&o1), 2);
        assert_eq!(rank(&o2), 2);
    }

    #[test]
    fn sequences() {
        let w = witness(&obj_sig_clos());
        let s1 = ObjSequence::Seq(vec![RawObject::Bottom]);
        let s2 = ObjSequence::Seq(vec![w.clone()]);
        let s3 = ObjSequence::Seq(vec![RawObject::Bottom, RawObject::Bottom]);
        assert!(ObjSequence::BottomSeq.approx(&s3));
        assert!(s1.approx(&s2));
        assert!(!s1.approx(&s3) && !s3.approx(&s1));
        assert_eq!(s1.lub(&s2), Some(s2.clone()));
        assert_eq!(s1.lub(&s3), None);
    }
}
