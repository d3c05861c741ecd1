//! Shared example hierarchies, built by hand so they do not depend on the
//! parser.

use alloc::vec;
use alloc::vec::Vec;

use crate::sig::{
    ClassName, ClassSignature, FieldSignature, Label, MethodSignature, SignatureClosure,
    SignatureEnvironment,
};

pub const PAIR_SOURCE: &str = include_str!("../../../fixtures/appendixA.noop");
pub const DIAMOND_SOURCE: &str = include_str!("../../../fixtures/diamond.noop");
pub const CYCLE_SOURCE: &str = include_str!("../../../fixtures/cycle.noop");
pub const DROPPED_METHOD_SOURCE: &str = include_str!("../../../fixtures/dropped_method.noop");
pub const SHAPE_MISMATCH_OBJECT: &str = include_str!("../../../fixtures/shape_mismatch.obj");

fn cn(s: &str) -> ClassName {
    ClassName::new(s).expect("fixture name")
}

fn lb(s: &str) -> Label {
    Label::new(s).expect("fixture label")
}

fn equals() -> MethodSignature {
    MethodSignature::new(lb("equals"), vec![cn("Object")], cn("Boolean"))
}

/// `(Object, [], [], [(equals, [Object], Boolean)])`
pub fn obj_sig() -> ClassSignature {
    ClassSignature::new(cn("Object"), vec![], vec![], vec![equals()])
}

/// `(Boolean, [Object], [], [(equals, [Object], Boolean)])`
pub fn bool_sig() -> ClassSignature {
    ClassSignature::new(cn("Boolean"), vec![cn("Object")], vec![], vec![equals()])
}

pub fn pair_sig() -> ClassSignature {
    ClassSignature::new(
        cn("Pair"),
        vec![cn("Object")],
        vec![
            FieldSignature::new(lb("first"), cn("Object")),
            FieldSignature::new(lb("second"), cn("Object")),
        ],
        vec![equals(), MethodSignature::new(lb("swap"), vec![], cn("Pair"))],
    )
}

/// `{ObjSig, BoolSig}`
pub fn obj_sig_env() -> SignatureEnvironment {
    SignatureEnvironment::validate([obj_sig(), bool_sig()]).expect("valid fixture")
}

/// `{ObjSig, BoolSig, PairSig}`
pub fn pair_sig_env() -> SignatureEnvironment {
    SignatureEnvironment::validate([obj_sig(), bool_sig(), pair_sig()]).expect("valid fixture")
}

pub fn obj_sig_clos() -> SignatureClosure {
    SignatureClosure::new(cn("Object"), obj_sig_env()).expect("closure")
}

pub fn bool_sig_clos() -> SignatureClosure {
    SignatureClosure::new(cn("Boolean"), obj_sig_env()).expect("closure")
}

pub fn pair_sig_clos() -> SignatureClosure {
    SignatureClosure::new(cn("Pair"), pair_sig_env()).expect("closure")
}

/// The three closures of the small example, in the order Object, Boolean,
/// Pair.
pub fn pair_closures() -> Vec<SignatureClosure> {
    vec![obj_sig_clos(), bool_sig_clos(), pair_sig_clos()]
}

pub fn diamond_sigs() -> Vec<ClassSignature> {
    let next = || FieldSignature::new(lb("next"), cn("Root"));
    let peer = || MethodSignature::new(lb("peer"), vec![], cn("Root"));
    vec![
        ClassSignature::new(cn("Root"), vec![], vec![], vec![]),
        ClassSignature::new(cn("Left"), vec![cn("Root")], vec![next()], vec![]),
        ClassSignature::new(cn("Right"), vec![cn("Root")], vec![], vec![peer()]),
        ClassSignature::new(cn("Both"), vec![cn("Left"), cn("Right")], vec![next()], vec![peer()]),
        ClassSignature::new(cn("Mark"), vec![], vec![], vec![]),
        ClassSignature::new(cn("Tip"), vec![cn("Both"), cn("Mark")], vec![next()], vec![peer()]),
    ]
}

/// Six classes with a diamond `Both <: Left, Right <: Root` and a second
/// root `Mark` under `Tip`.
pub fn diamond_env() -> SignatureEnvironment {
    SignatureEnvironment::validate(diamond_sigs()).expect("valid fixture")
}
