//! The projection of raw objects onto valid objects.
//!
//! Methods are filtered exactly: the filtered method is
//! `s ↦ F_out(m(F_in(s)))` with `F_in` the componentwise filter against the
//! declared input closures. Its finite table is computed from the minimal
//! valid upper bounds of the original step arguments.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{lub_closure, FiniteMethod, MethodError, RawObject, Step, Triple};
use crate::rec::Record;
use crate::sig::{subsign, ClassSignature, MethodSignature, SignatureClosure};

fn shapes_match(t: &Triple, sig: &ClassSignature) -> bool {
    t.fields.len() == sig.fields().len()
        && sig.fields().iter().all(|f| t.fields.get(&f.name).is_some())
        && t.methods.len() == sig.methods().len()
        && sig.methods().iter().all(|m| t.methods.get(&m.name).is_some())
}

/// Input closures (self first) and output closure of a method declared in
/// `sc`.
pub fn method_closures(
    sc: &SignatureClosure,
    msig: &MethodSignature,
) -> (Vec<SignatureClosure>, SignatureClosure) {
    let mut ins = vec![sc.clone()];
    ins.extend(
        msig.param_types
            .iter()
            .map(|p| sc.closure_of(p).expect("validated closures bind their types")),
    );
    let out = sc
        .closure_of(&msig.return_type)
        .expect("validated closures bind their types");
    (ins, out)
}

/// The greatest valid object below `o`.
pub fn filter(o: &RawObject) -> RawObject {
    let t = match o {
        RawObject::Bottom => return RawObject::Bottom,
        RawObject::Obj(t) => t,
    };
    let sc = &t.closure;
    let sig = sc.root();
    if !shapes_match(t, sig) {
        // non-matching shapes
        return RawObject::Bottom;
    }
    let fields: Record<RawObject> = sig
        .fields()
        .iter()
        .map(|f| {
            let decl = sc.closure_of(&f.type_name).expect("validated closures bind their types");
            let v = t.fields.get(&f.name).expect("shape checked");
            (f.name.clone(), filter_obj_sig(&decl, v))
        })
        .collect();
    let methods: Record<FiniteMethod> = sig
        .methods()
        .iter()
        .map(|msig| {
            let (ins, out) = method_closures(sc, msig);
            let m = t.methods.get(&msig.name).expect("shape checked");
            // a table of the wrong arity never fires on a sequence of the
            // declared length, so the filtered function is bottom
            let g = filter_meth_sig(&ins, &out, m).unwrap_or_default();
            (msig.name.clone(), g)
        })
        .collect();
    let out = RawObject::new(sc.clone(), fields, methods);
    if &out == o {
        o.clone()
    } else {
        out
    }
}

/// `filter(o)` when `o`'s closure subsigns `declared`, bottom otherwise.
pub fn filter_obj_sig(declared: &SignatureClosure, o: &RawObject) -> RawObject {
    match o {
        RawObject::Obj(t) if subsign(&t.closure, declared) => filter(o),
        _ => RawObject::Bottom,
    }
}

fn filter_seq(ins: &[SignatureClosure], args: &[RawObject]) -> Vec<RawObject> {
    ins.iter().zip(args).map(|(c, a)| filter_obj_sig(c, a)).collect()
}

/// The table of `s ↦ filter_obj_sig(out, m(map filter_obj_sig ins s))`.
pub fn filter_meth_sig(
    ins: &[SignatureClosure],
    out: &SignatureClosure,
    m: &FiniteMethod,
) -> Result<FiniteMethod, MethodError> {
    let Some(arity) = m.arity() else {
        return Ok(FiniteMethod::bottom());
    };
    if arity != ins.len() {
        return Err(MethodError::ArityMismatch {
            expected: ins.len(),
            found: arity,
        });
    }
    // m(F_in(s)) only changes where s passes a minimal valid upper bound of
    // some step argument; the filtered value can change at any lub of those
    let mut points = BTreeSet::new();
    for s in m.steps() {
        points.extend(minimal_valid_seqs(ins, &s.args));
    }
    let points = lub_closure(points);
    let steps = points.into_iter().map(|y| {
        let r = filter_obj_sig(out, &m.apply(&filter_seq(ins, &y)));
        Step::new(y, r)
    });
    Ok(FiniteMethod::from_steps(steps).expect("filtered tables are consistent"))
}

/// Minimal elements of `{v | o ⊑ v, v = filter_obj_sig(declared, v)}`.
pub fn minimal_valid_above(declared: &SignatureClosure, o: &RawObject) -> Vec<RawObject> {
    let t = match o {
        RawObject::Bottom => return vec![RawObject::Bottom],
        RawObject::Obj(t) => t,
    };
    if !subsign(&t.closure, declared) {
        return Vec::new();
    }
    let sc = &t.closure;
    let sig = sc.root();
    if !shapes_match(t, sig) {
        return Vec::new();
    }
    let mut field_opts = Vec::new();
    for f in sig.fields() {
        let decl = sc.closure_of(&f.type_name).expect("validated closures bind their types");
        let opts = minimal_valid_above(&decl, t.fields.get(&f.name).expect("shape checked"));
        if opts.is_empty() {
            return Vec::new();
        }
        field_opts.push((f.name.clone(), opts));
    }
    let mut method_opts = Vec::new();
    for msig in sig.methods() {
        let (ins, out) = method_closures(sc, msig);
        let opts = minimal_conforming_above(&ins, &out, t.methods.get(&msig.name).expect("shape checked"));
        if opts.is_empty() {
            return Vec::new();
        }
        method_opts.push((msig.name.clone(), opts));
    }
    // componentwise order, so minimal elements of the product are products
    // of minimal elements
    let fields = product(&field_opts);
    let methods = product(&method_opts);
    let mut out = Vec::with_capacity(fields.len() * methods.len());
    for f in &fields {
        for m in &methods {
            out.push(RawObject::new(
                sc.clone(),
                f.iter().cloned().collect(),
                m.iter().cloned().collect(),
            ));
        }
    }
    out
}

fn minimal_valid_seqs(ins: &[SignatureClosure], args: &[RawObject]) -> Vec<Vec<RawObject>> {
    let opts: Vec<((), Vec<RawObject>)> = ins
        .iter()
        .zip(args)
        .map(|(c, a)| ((), minimal_valid_above(c, a)))
        .collect();
    if opts.iter().any(|(_, o)| o.is_empty()) {
        return Vec::new();
    }
    product(&opts)
        .into_iter()
        .map(|v| v.into_iter().map(|(_, o)| o).collect())
        .collect()
}

/// Minimal fixed points of `filter_meth_sig(ins, out, -)` above `m`.
fn minimal_conforming_above(
    ins: &[SignatureClosure],
    out: &SignatureClosure,
    m: &FiniteMethod,
) -> Vec<FiniteMethod> {
    let Some(arity) = m.arity() else {
        return vec![FiniteMethod::bottom()];
    };
    if arity != ins.len() {
        // every step has a proper result that no conforming method reaches
        return Vec::new();
    }
    let mut per_step = Vec::new();
    for s in m.steps() {
        let uppers = minimal_valid_above(out, &s.result);
        if uppers.is_empty() {
            return Vec::new();
        }
        per_step.push((filter_seq(ins, &s.args), uppers));
    }
    let mut candidates: Vec<FiniteMethod> = Vec::new();
    for choice in product(&per_step) {
        let table = choice.into_iter().map(|(a, u)| Step::new(a, u));
        if let Ok(g) = FiniteMethod::from_steps(table) {
            if !candidates.contains(&g) {
                candidates.push(g);
            }
        }
    }
    let minimal: Vec<FiniteMethod> = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|d| d != *c && super::meth_approx(d, c))
        })
        .cloned()
        .collect();
    minimal
}

/// All ways of picking one option per key, in key order.
fn product<K: Clone, V: Clone>(opts: &[(K, Vec<V>)]) -> Vec<Vec<(K, V)>> {
    let mut acc: Vec<Vec<(K, V)>> = vec![Vec::new()];
    for (k, vs) in opts {
        let mut next = Vec::with_capacity(acc.len() * vs.len());
        for prefix in &acc {
            for v in vs {
                let mut p = prefix.clone();
                p.push((k.clone(), v.clone()));
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}
