use alloc::vec::Vec;
use core::fmt;

use super::{RawObject, Triple};
use crate::sig::{subsign, ClassName, Label, SignatureClosure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathStep {
    Field(Label),
    Arg {
        method: Label,
        step: usize,
        position: usize,
    },
    Result {
        method: Label,
        step: usize,
    },
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathStep::Field(l) => write!(f, "{l}"),
            PathStep::Arg {
                method,
                step,
                position,
            } => write!(f, "{method}[{step}].arg{position}"),
            PathStep::Result { method, step } => write!(f, "{method}[{step}].result"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clause {
    FieldShape { class: ClassName },
    MethodShape { class: ClassName },
    Arity {
        method: Label,
        expected: usize,
        found: usize,
    },
    NotSubsign { found: ClassName, declared: ClassName },
    /// A declared type has no closure; cannot happen for validated
    /// environments.
    Unbound(ClassName),
}

/// The first violated clause of validity, with the path to the offending
/// sub-object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<PathStep>,
    pub clause: Clause,
}

impl Violation {
    fn at(clause: Clause) -> Self {
        Violation {
            path: Vec::new(),
            clause,
        }
    }

    fn under(mut self, step: PathStep) -> Self {
        self.path.insert(0, step);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.path.is_empty() {
            f.write_str("at ")?;
            for (i, p) in self.path.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(": ")?;
        }
        match &self.clause {
            Clause::FieldShape { class } => {
                write!(f, "field shape differs from the fields of `{class}`")
            }
            Clause::MethodShape { class } => {
                write!(f, "method shape differs from the methods of `{class}`")
            }
            Clause::Arity {
                method,
                expected,
                found,
            } => write!(
                f,
                "method `{method}` has a step of arity {found}, expected {expected} including self"
            ),
            Clause::NotSubsign { found, declared } => {
                write!(f, "closure `{found}` does not subsign `{declared}`")
            }
            Clause::Unbound(n) => write!(f, "declared type `{n}` has no closure"),
        }
    }
}

pub fn valid(o: &RawObject) -> bool {
    validate(o).is_ok()
}

/// Checks validity: bottom, or matching shapes with every non-bottom field
/// value and every step argument and result valid and subsigning its
/// declared closure. The self argument is checked against the object's own
/// closure.
pub fn validate(o: &RawObject) -> Result<(), Violation> {
    match o {
        RawObject::Bottom => Ok(()),
        RawObject::Obj(t) => validate_triple(t),
    }
}

fn declared(sc: &SignatureClosure, name: &ClassName) -> Result<SignatureClosure, Violation> {
    sc.closure_of(name)
        .map_err(|_| Violation::at(Clause::Unbound(name.clone())))
}

/// `v` is bottom, or valid with a closure subsigning `decl`.
pub(crate) fn conforms(v: &RawObject, decl: &SignatureClosure) -> Result<(), Violation> {
    match v {
        RawObject::Bottom => Ok(()),
        RawObject::Obj(t) => {
            if !subsign(&t.closure, decl) {
                return Err(Violation::at(Clause::NotSubsign {
                    found: t.closure.root_name().clone(),
                    declared: decl.root_name().clone(),
                }));
            }
            validate_triple(t)
        }
    }
}

fn validate_triple(t: &Triple) -> Result<(), Violation> {
    let sc = &t.closure;
    let sig = sc.root();
    let class = sig.name().clone();
    if !(t.fields.len() == sig.fields().len()
        && sig.fields().iter().all(|f| t.fields.get(&f.name).is_some()))
    {
        return Err(Violation::at(Clause::FieldShape { class }));
    }
    if !(t.methods.len() == sig.methods().len()
        && sig.methods().iter().all(|m| t.methods.get(&m.name).is_some()))
    {
        return Err(Violation::at(Clause::MethodShape { class }));
    }
    for fsig in sig.fields() {
        let v = t.fields.get(&fsig.name).expect("shape checked");
        let decl = declared(sc, &fsig.type_name)?;
        conforms(v, &decl).map_err(|e| e.under(PathStep::Field(fsig.name.clone())))?;
    }
    for msig in sig.methods() {
        let m = t.methods.get(&msig.name).expect("shape checked");
        if m.is_bottom() {
            continue;
        }
        let expected = msig.param_types.len() + 1;
        let mut ins = Vec::with_capacity(expected);
        ins.push(sc.clone());
        for p in &msig.param_types {
            ins.push(declared(sc, p)?);
        }
        let out = declared(sc, &msig.return_type)?;
        for (i, s) in m.steps().iter().enumerate() {
            if s.args.len() != expected {
                return Err(Violation::at(Clause::Arity {
                    method: msig.name.clone(),
                    expected,
                    found: s.args.len(),
                }));
            }
            for (j, (a, decl)) in s.args.iter().zip(&ins).enumerate() {
                conforms(a, decl).map_err(|e| {
                    e.under(PathStep::Arg {
                        method: msig.name.clone(),
                        step: i,
                        position: j,
                    })
                })?;
            }
            conforms(&s.result, &out).map_err(|e| {
                e.under(PathStep::Result {
                    method: msig.name.clone(),
                    step: i,
                })
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::obj::tests::{lb, obj_with_equals, pair};
    use crate::obj::{witness, FiniteMethod, Step};
    use crate::rec::Record;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn bottom_and_witnesses_are_valid() {
        assert!(valid(&RawObject::Bottom));
        for sc in pair_closures() {
            assert!(valid(&witness(&sc)));
        }
    }

    #[test]
    fn missing_field_breaks_shape() {
        let o = RawObject::new(
            pair_sig_clos(),
            [(lb("first"), RawObject::Bottom)].into_iter().collect(),
            [(lb("equals"), FiniteMethod::bottom()), (lb("swap"), FiniteMethod::bottom())]
                .into_iter()
                .collect(),
        );
        let v = validate(&o).unwrap_err();
        assert_eq!(v.clause, Clause::FieldShape { class: ClassName::new("Pair").unwrap() });
        let no_methods = RawObject::new(obj_sig_clos(), Record::empty(), Record::empty());
        assert!(matches!(validate(&no_methods).unwrap_err().clause, Clause::MethodShape { .. }));
    }

    #[test]
    fn field_values_must_subsign() {
        let ok = pair(witness(&pair_sig_clos()), witness(&bool_sig_clos()));
        assert!(valid(&ok));
        let bad_inner = pair(
            RawObject::new(obj_sig_clos(), Record::empty(), Record::empty()),
            RawObject::Bottom,
        );
        let v = validate(&bad_inner).unwrap_err();
        assert_eq!(v.path, vec![PathStep::Field(lb("first"))]);
        assert_eq!(v.to_string(), "at first: method shape differs from the methods of `Object`");
    }

    #[test]
    fn method_steps_must_conform() {
        let wo = witness(&obj_sig_clos());
        let wb = witness(&bool_sig_clos());
        let good = FiniteMethod::from_steps(vec![Step::new(vec![wb.clone(), wo.clone()], wb.clone())]).unwrap();
        assert!(valid(&obj_with_equals(good)));
        // result must be a Boolean
        let bad = FiniteMethod::from_steps(vec![Step::new(vec![RawObject::Bottom, RawObject::Bottom], wo.clone())]).unwrap();
        let v = validate(&obj_with_equals(bad)).unwrap_err();
        assert_eq!(
            v.clause,
            Clause::NotSubsign {
                found: ClassName::new("Object").unwrap(),
                declared: ClassName::new("Boolean").unwrap()
            }
        );
        // arity counts self
        let short = FiniteMethod::from_steps(vec![Step::new(vec![wo.clone()], wb.clone())]).unwrap();
        assert!(matches!(
            validate(&obj_with_equals(short)).unwrap_err().clause,
            Clause::Arity { expected: 2, found: 1, .. }
        ));
        // self must subsign the object's own closure
        let w_pair = witness(&pair_sig_clos());
        let selfish = FiniteMethod::from_steps(vec![Step::new(vec![wo.clone(), RawObject::Bottom], wb.clone())]).unwrap();
        let on_pair = RawObject::new(
            pair_sig_clos(),
            w_pair.triple().unwrap().fields.clone(),
            [(lb("equals"), selfish), (lb("swap"), FiniteMethod::bottom())].into_iter().collect(),
        );
        assert!(matches!(
            validate(&on_pair).unwrap_err().path[0],
            PathStep::Arg { position: 0, .. }
        ));
    }
}
