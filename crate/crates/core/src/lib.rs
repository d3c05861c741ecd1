//! Kernel of a nominal object model: class signatures and their closures,
//! record domains with an effective basis, raw objects, the validity filter
//! and class types.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod fixtures;
pub mod obj;
pub mod parse;
pub mod rec;
pub mod sig;
pub mod types;

pub use sig::{
    closure_of, extends_env, immediate_subsign, lookup, shapes, sig_equals, subsign, ClassName,
    ClassSignature, EnvError, FieldSignature, Label, MethodSignature, SignatureClosure,
    SignatureEnvironment,
};
