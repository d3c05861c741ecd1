//! Class signatures, signature environments and signature closures.
//!
//! A class signature is the nominal interface of a class: its name, the names
//! of its immediate supersignatures, and its field and method signatures.
//! Environments are finite, consistent sets of signatures; closures pair a
//! root name with the smallest environment that binds every name the root
//! reaches.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Returns true if `text` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Rejected identifier text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidIdentifier(pub String);

impl fmt::Display for InvalidIdentifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid identifier `{}`", self.0)
    }
}

macro_rules! identifier_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(text: &str) -> Result<Self, InvalidIdentifier> {
                if is_identifier(text) {
                    Ok($name(Arc::from(text)))
                } else {
                    Err(InvalidIdentifier(text.to_string()))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl core::str::FromStr for $name {
            type Err = InvalidIdentifier;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::new(s)
            }
        }
    };
}

identifier_newtype!(
    /// A member (field or method) name.
    Label
);
identifier_newtype!(
    /// A class (signature) name.
    ClassName
);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSignature {
    pub name: Label,
    pub type_name: ClassName,
}

/// Parameter order and repetitions are significant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodSignature {
    pub name: Label,
    pub param_types: Vec<ClassName>,
    pub return_type: ClassName,
}

impl FieldSignature {
    pub fn new(name: Label, type_name: ClassName) -> Self {
        FieldSignature { name, type_name }
    }
}

impl MethodSignature {
    pub fn new(name: Label, param_types: Vec<ClassName>, return_type: ClassName) -> Self {
        MethodSignature {
            name,
            param_types,
            return_type,
        }
    }
}

/// Order-insensitive view of a signature used for equality and ordering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct CanonicalSig {
    supers: Vec<ClassName>,
    fields: Vec<FieldSignature>,
    methods: Vec<MethodSignature>,
}

fn sorted_dedup<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    let mut out = items.to_vec();
    out.sort();
    out.dedup();
    out
}

/// A class signature `(name, supers, fields, methods)`.
///
/// The sequences keep their source order. Equality, ordering and hashing
/// ignore order and repetition in all three sequences; member signatures
/// themselves compare exactly.
#[derive(Debug, Clone)]
pub struct ClassSignature {
    name: ClassName,
    supers: Vec<ClassName>,
    fields: Vec<FieldSignature>,
    methods: Vec<MethodSignature>,
    canon: CanonicalSig,
}

impl ClassSignature {
    pub fn new(
        name: ClassName,
        supers: Vec<ClassName>,
        fields: Vec<FieldSignature>,
        methods: Vec<MethodSignature>,
    ) -> Self {
        let canon = CanonicalSig {
            supers: sorted_dedup(&supers),
            fields: sorted_dedup(&fields),
            methods: sorted_dedup(&methods),
        };
        ClassSignature {
            name,
            supers,
            fields,
            methods,
            canon,
        }
    }

    pub fn name(&self) -> &ClassName {
        &self.name
    }

    pub fn supers(&self) -> &[ClassName] {
        &self.supers
    }

    pub fn fields(&self) -> &[FieldSignature] {
        &self.fields
    }

    pub fn methods(&self) -> &[MethodSignature] {
        &self.methods
    }

    pub fn field(&self, name: &Label) -> Option<&FieldSignature> {
        self.fields.iter().find(|f| &f.name == name)
    }

    pub fn method(&self, name: &Label) -> Option<&MethodSignature> {
        self.methods.iter().find(|m| &m.name == name)
    }

    /// Field shape and method shape.
    pub fn shapes(&self) -> (BTreeSet<Label>, BTreeSet<Label>) {
        (
            self.fields.iter().map(|f| f.name.clone()).collect(),
            self.methods.iter().map(|m| m.name.clone()).collect(),
        )
    }

    /// Every class name this signature mentions, supers first.
    pub fn references(&self) -> impl Iterator<Item = &ClassName> {
        self.supers
            .iter()
            .chain(self.fields.iter().map(|f| &f.type_name))
            .chain(self.methods.iter().flat_map(|m| {
                m.param_types.iter().chain(core::iter::once(&m.return_type))
            }))
    }

    /// Duplicate supers, field names and method names, in source order.
    pub fn duplicate_violations(&self) -> Vec<EnvError> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for s in &self.supers {
            if !seen.insert(s) {
                out.push(EnvError::DuplicateSuper {
                    class: self.name.clone(),
                    name: s.clone(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for f in &self.fields {
            if !seen.insert(&f.name) {
                out.push(EnvError::DuplicateMember {
                    class: self.name.clone(),
                    member: f.name.clone(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for m in &self.methods {
            if !seen.insert(&m.name) {
                out.push(EnvError::DuplicateMember {
                    class: self.name.clone(),
                    member: m.name.clone(),
                });
            }
        }
        out
    }
}

impl PartialEq for ClassSignature {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.canon == other.canon
    }
}

impl Eq for ClassSignature {}

impl PartialOrd for ClassSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClassSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name
            .cmp(&other.name)
            .then_with(|| self.canon.cmp(&other.canon))
    }
}

impl core::hash::Hash for ClassSignature {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.canon.hash(state);
    }
}

/// Signature equality: names equal, the three sequences equal as sets.
pub fn sig_equals(s1: &ClassSignature, s2: &ClassSignature) -> bool {
    s1 == s2
}

/// Violations of the environment conditions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EnvError {
    DuplicateName(ClassName),
    DuplicateSuper { class: ClassName, name: ClassName },
    DuplicateMember { class: ClassName, member: Label },
    DanglingReference { class: ClassName, name: ClassName },
    /// The path repeats its first name at the end, e.g. `[A, B, A]`.
    SupersignatureCycle(Vec<ClassName>),
    MemberNotInherited {
        class: ClassName,
        superclass: ClassName,
        member: Label,
    },
    UnboundName(ClassName),
}

impl EnvError {
    /// The class the diagnostic is best attributed to.
    pub fn class(&self) -> &ClassName {
        match self {
            EnvError::DuplicateName(c) | EnvError::UnboundName(c) => c,
            EnvError::DuplicateSuper { class, .. }
            | EnvError::DuplicateMember { class, .. }
            | EnvError::DanglingReference { class, .. }
            | EnvError::MemberNotInherited { class, .. } => class,
            EnvError::SupersignatureCycle(path) => &path[0],
        }
    }
}

impl fmt::Display for EnvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvError::DuplicateName(n) => write!(f, "duplicate class signature name `{n}`"),
            EnvError::DuplicateSuper { class, name } => {
                write!(f, "class `{class}` names supersignature `{name}` twice")
            }
            EnvError::DuplicateMember { class, member } => {
                write!(f, "class `{class}` declares member `{member}` twice")
            }
            EnvError::DanglingReference { class, name } => {
                write!(f, "class `{class}` refers to unbound name `{name}`")
            }
            EnvError::SupersignatureCycle(path) => {
                f.write_str("supersignature cycle ")?;
                for (i, n) in path.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" -> ")?;
                    }
                    write!(f, "{n}")?;
                }
                Ok(())
            }
            EnvError::MemberNotInherited {
                class,
                superclass,
                member,
            } => write!(
                f,
                "class `{class}` does not carry member `{member}` of supersignature `{superclass}` with an identical signature"
            ),
            EnvError::UnboundName(n) => write!(f, "name `{n}` is not bound"),
        }
    }
}

/// A validated signature environment, keyed by class name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SignatureEnvironment {
    sigs: BTreeMap<ClassName, ClassSignature>,
}

impl SignatureEnvironment {
    /// Checks unique names, per-signature duplicate freedom, referential
    /// closure, acyclic supersignatures and member inclusion. All violations
    /// are reported.
    pub fn validate<I>(sigs: I) -> Result<Self, Vec<EnvError>>
    where
        I: IntoIterator<Item = ClassSignature>,
    {
        let mut errors = Vec::new();
        let mut map: BTreeMap<ClassName, ClassSignature> = BTreeMap::new();
        let mut reported_dupes = BTreeSet::new();
        for sig in sigs {
            match map.get(sig.name()) {
                // a set holds one copy of equal elements
                Some(existing) if existing == &sig => {}
                Some(_) => {
                    if reported_dupes.insert(sig.name().clone()) {
                        errors.push(EnvError::DuplicateName(sig.name().clone()));
                    }
                }
                None => {
                    map.insert(sig.name().clone(), sig);
                }
            }
        }

        for sig in map.values() {
            errors.extend(sig.duplicate_violations());
        }

        for sig in map.values() {
            let mut reported = BTreeSet::new();
            for r in sig.references() {
                if !map.contains_key(r) && reported.insert(r) {
                    errors.push(EnvError::DanglingReference {
                        class: sig.name().clone(),
                        name: r.clone(),
                    });
                }
            }
        }

        errors.extend(find_cycles(&map).into_iter().map(EnvError::SupersignatureCycle));

        for sig in map.values() {
            let fields: BTreeSet<&FieldSignature> = sig.fields().iter().collect();
            let methods: BTreeSet<&MethodSignature> = sig.methods().iter().collect();
            let mut seen_supers = BTreeSet::new();
            for sup in sig.supers() {
                if !seen_supers.insert(sup) {
                    continue;
                }
                let Some(super_sig) = map.get(sup) else {
                    continue;
                };
                for f in super_sig.fields() {
                    if !fields.contains(f) {
                        errors.push(EnvError::MemberNotInherited {
                            class: sig.name().clone(),
                            superclass: sup.clone(),
                            member: f.name.clone(),
                        });
                    }
                }
                for m in super_sig.methods() {
                    if !methods.contains(m) {
                        errors.push(EnvError::MemberNotInherited {
                            class: sig.name().clone(),
                            superclass: sup.clone(),
                            member: m.name.clone(),
                        });
                    }
                }
            }
        }

        if errors.is_empty() {
            Ok(SignatureEnvironment { sigs: map })
        } else {
            Err(errors)
        }
    }

    pub fn empty() -> Self {
        SignatureEnvironment::default()
    }

    pub fn lookup(&self, name: &ClassName) -> Result<&ClassSignature, EnvError> {
        self.sigs
            .get(name)
            .ok_or_else(|| EnvError::UnboundName(name.clone()))
    }

    pub fn get(&self, name: &ClassName) -> Option<&ClassSignature> {
        self.sigs.get(name)
    }

    pub fn contains(&self, name: &ClassName) -> bool {
        self.sigs.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.sigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigs.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &ClassName> {
        self.sigs.keys()
    }

    /// Signatures in name order.
    pub fn signatures(&self) -> impl Iterator<Item = &ClassSignature> {
        self.sigs.values()
    }

    /// `self ⊒ other`: every signature of `other` is in `self`.
    pub fn extends(&self, other: &SignatureEnvironment) -> bool {
        other
            .sigs
            .iter()
            .all(|(name, sig)| self.sigs.get(name) == Some(sig))
    }

    /// Names reachable from `root` along direct references, including `root`.
    pub fn reachable_from(&self, root: &ClassName) -> BTreeSet<ClassName> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![root.clone()];
        while let Some(name) = stack.pop() {
            if !seen.insert(name.clone()) {
                continue;
            }
            if let Some(sig) = self.sigs.get(&name) {
                for r in sig.references() {
                    if !seen.contains(r) {
                        stack.push(r.clone());
                    }
                }
            }
        }
        seen
    }

    /// Is `ancestor` reachable from `start` by one or more supersignature
    /// edges?
    pub fn has_super_path(&self, start: &ClassName, ancestor: &ClassName) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&ClassName> = match self.sigs.get(start) {
            Some(sig) => sig.supers().iter().collect(),
            None => return false,
        };
        while let Some(name) = stack.pop() {
            if name == ancestor {
                return true;
            }
            if !seen.insert(name) {
                continue;
            }
            if let Some(sig) = self.sigs.get(name) {
                stack.extend(sig.supers().iter());
            }
        }
        false
    }

    /// The signature closure rooted at `name`.
    pub fn closure_of(&self, name: &ClassName) -> Result<SignatureClosure, EnvError> {
        if !self.contains(name) {
            return Err(EnvError::UnboundName(name.clone()));
        }
        let keep = self.reachable_from(name);
        let sigs = self
            .sigs
            .iter()
            .filter(|(n, _)| keep.contains(*n))
            .map(|(n, s)| (n.clone(), s.clone()))
            .collect();
        Ok(SignatureClosure(Arc::new(ClosureData {
            root: name.clone(),
            env: SignatureEnvironment { sigs },
        })))
    }

    /// Closures for every name, in name order.
    pub fn closures(&self) -> Vec<SignatureClosure> {
        self.sigs
            .keys()
            .map(|n| self.closure_of(n).expect("name is bound"))
            .collect()
    }
}

/// Depth-first search over supersignature edges; each cycle is reported once
/// as the path from the first revisited name back to itself.
fn find_cycles(map: &BTreeMap<ClassName, ClassSignature>) -> Vec<Vec<ClassName>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit<'a>(
        name: &'a ClassName,
        map: &'a BTreeMap<ClassName, ClassSignature>,
        marks: &mut BTreeMap<&'a ClassName, Mark>,
        path: &mut Vec<&'a ClassName>,
        cycles: &mut Vec<Vec<ClassName>>,
    ) {
        marks.insert(name, Mark::Active);
        path.push(name);
        if let Some(sig) = map.get(name) {
            for sup in sig.supers() {
                let Some((key, _)) = map.get_key_value(sup) else {
                    continue;
                };
                match marks.get(key).copied().unwrap_or(Mark::Fresh) {
                    Mark::Fresh => visit(key, map, marks, path, cycles),
                    Mark::Active => {
                        let start = path.iter().position(|n| *n == key).unwrap_or(0);
                        let mut cycle: Vec<ClassName> =
                            path[start..].iter().map(|n| (*n).clone()).collect();
                        cycle.push(key.clone());
                        cycles.push(cycle);
                    }
                    Mark::Done => {}
                }
            }
        }
        path.pop();
        marks.insert(name, Mark::Done);
    }

    let mut marks = BTreeMap::new();
    let mut cycles = Vec::new();
    for name in map.keys() {
        if marks.get(name).copied().unwrap_or(Mark::Fresh) == Mark::Fresh {
            visit(name, map, &mut marks, &mut Vec::new(), &mut cycles);
        }
    }
    cycles
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct ClosureData {
    root: ClassName,
    env: SignatureEnvironment,
}

/// A signature closure `(root, env)`; cheap to clone.
///
/// Two closures are equal iff their roots are equal and their environments
/// are equal as sets.
#[derive(Debug, Clone, Hash)]
pub struct SignatureClosure(Arc<ClosureData>);

impl PartialEq for SignatureClosure {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for SignatureClosure {}

impl PartialOrd for SignatureClosure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignatureClosure {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl SignatureClosure {
    /// Builds a closure, checking that `env` binds `root` and holds nothing
    /// unreachable from it.
    pub fn new(root: ClassName, env: SignatureEnvironment) -> Result<Self, ClosureError> {
        if !env.contains(&root) {
            return Err(ClosureError::MissingRoot(root));
        }
        let reachable = env.reachable_from(&root);
        let redundant: Vec<ClassName> = env
            .names()
            .filter(|n| !reachable.contains(*n))
            .cloned()
            .collect();
        if !redundant.is_empty() {
            return Err(ClosureError::NotMinimal(redundant));
        }
        Ok(SignatureClosure(Arc::new(ClosureData { root, env })))
    }

    pub fn root_name(&self) -> &ClassName {
        &self.0.root
    }

    pub fn env(&self) -> &SignatureEnvironment {
        &self.0.env
    }

    pub fn root(&self) -> &ClassSignature {
        self.0.env.get(&self.0.root).expect("closure binds its root")
    }

    /// Closure of a name referenced from this closure's environment.
    pub fn closure_of(&self, name: &ClassName) -> Result<SignatureClosure, EnvError> {
        if name == self.root_name() {
            return Ok(self.clone());
        }
        self.env().closure_of(name)
    }

    pub fn shapes(&self) -> (BTreeSet<Label>, BTreeSet<Label>) {
        self.root().shapes()
    }
}

impl fmt::Display for SignatureClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureError {
    MissingRoot(ClassName),
    NotMinimal(Vec<ClassName>),
}

impl fmt::Display for ClosureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureError::MissingRoot(n) => write!(f, "environment does not bind root `{n}`"),
            ClosureError::NotMinimal(names) => {
                f.write_str("environment holds signatures unreachable from the root:")?;
                for n in names {
                    write!(f, " {n}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn lookup<'a>(
    env: &'a SignatureEnvironment,
    name: &ClassName,
) -> Result<&'a ClassSignature, EnvError> {
    env.lookup(name)
}

pub fn closure_of(env: &SignatureEnvironment, name: &ClassName) -> Result<SignatureClosure, EnvError> {
    env.closure_of(name)
}

pub fn extends_env(e2: &SignatureEnvironment, e1: &SignatureEnvironment) -> bool {
    e2.extends(e1)
}

/// `sc2 ⊴₁ sc1`.
pub fn immediate_subsign(sc2: &SignatureClosure, sc1: &SignatureClosure) -> bool {
    sc2.env().extends(sc1.env()) && sc2.root().supers().contains(sc1.root_name())
}

/// `sc2 ⊴ sc1`, the reflexive-transitive closure of [`immediate_subsign`].
///
/// Every intermediate closure on a chain from `sc2` is the closure of a
/// supersignature name inside `sc2`'s environment, so the relation reduces
/// to equality or a supersignature path plus environment extension.
pub fn subsign(sc2: &SignatureClosure, sc1: &SignatureClosure) -> bool {
    if sc2 == sc1 {
        return true;
    }
    sc2.env().has_super_path(sc2.root_name(), sc1.root_name()) && sc2.env().extends(sc1.env())
}

pub fn shapes(s: &ClassSignature) -> (BTreeSet<Label>, BTreeSet<Label>) {
    s.shapes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn cn(s: &str) -> ClassName {
        ClassName::new(s).unwrap()
    }

    fn lb(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("_a9"));
        assert!(is_identifier("Pair"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("9a"));
        assert!(!is_identifier("a-b"));
        assert!(Label::new("x y").is_err());
    }

    #[test]
    fn pair_env_is_valid() {
        let env = pair_sig_env();
        assert_eq!(env.len(), 3);
        assert_eq!(env.lookup(&cn("Pair")).unwrap(), &pair_sig());
        assert_eq!(env.lookup(&cn("Object")).unwrap(), &obj_sig());
        assert_eq!(
            env.lookup(&cn("Missing")),
            Err(EnvError::UnboundName(cn("Missing")))
        );
    }

    #[test]
    fn empty_env_is_valid() {
        let env = SignatureEnvironment::validate(Vec::new()).unwrap();
        assert!(env.is_empty());
    }

    #[test]
    fn two_cycle_reported_with_path() {
        let a = ClassSignature::new(cn("A"), vec![cn("B")], vec![], vec![]);
        let b = ClassSignature::new(cn("B"), vec![cn("A")], vec![], vec![]);
        let errs = SignatureEnvironment::validate(vec![a, b]).unwrap_err();
        assert_eq!(
            errs,
            vec![EnvError::SupersignatureCycle(vec![cn("A"), cn("B"), cn("A")])]
        );
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let a = ClassSignature::new(cn("A"), vec![cn("A")], vec![], vec![]);
        let errs = SignatureEnvironment::validate(vec![a]).unwrap_err();
        assert_eq!(errs, vec![EnvError::SupersignatureCycle(vec![cn("A"), cn("A")])]);
    }

    #[test]
    fn all_violations_accumulate() {
        let a = ClassSignature::new(
            cn("A"),
            vec![cn("Ghost"), cn("B")],
            vec![FieldSignature::new(lb("x"), cn("A")), FieldSignature::new(lb("x"), cn("A"))],
            vec![],
        );
        let b = ClassSignature::new(
            cn("B"),
            vec![],
            vec![FieldSignature::new(lb("y"), cn("B"))],
            vec![],
        );
        let b2 = ClassSignature::new(cn("B"), vec![cn("A")], vec![], vec![]);
        let errs = SignatureEnvironment::validate(vec![a, b, b2]).unwrap_err();
        assert!(errs.contains(&EnvError::DuplicateName(cn("B"))));
        assert!(errs.contains(&EnvError::DuplicateMember {
            class: cn("A"),
            member: lb("x")
        }));
        assert!(errs.contains(&EnvError::DanglingReference {
            class: cn("A"),
            name: cn("Ghost")
        }));
        assert!(errs.contains(&EnvError::MemberNotInherited {
            class: cn("A"),
            superclass: cn("B"),
            member: lb("y")
        }));
    }

    #[test]
    fn inherited_member_needs_exact_signature() {
        let base = ClassSignature::new(
            cn("Base"),
            vec![],
            vec![],
            vec![MethodSignature::new(lb("m"), vec![cn("Base")], cn("Base"))],
        );
        // same name, covariant return: rejected
        let sub = ClassSignature::new(
            cn("Sub"),
            vec![cn("Base")],
            vec![],
            vec![MethodSignature::new(lb("m"), vec![cn("Base")], cn("Sub"))],
        );
        let errs = SignatureEnvironment::validate(vec![base, sub]).unwrap_err();
        assert_eq!(
            errs,
            vec![EnvError::MemberNotInherited {
                class: cn("Sub"),
                superclass: cn("Base"),
                member: lb("m")
            }]
        );
    }

    #[test]
    fn field_and_method_may_share_a_name() {
        let s = ClassSignature::new(
            cn("C"),
            vec![],
            vec![FieldSignature::new(lb("v"), cn("C"))],
            vec![MethodSignature::new(lb("v"), vec![], cn("C"))],
        );
        assert!(SignatureEnvironment::validate(vec![s]).is_ok());
    }

    #[test]
    fn closures_of_pair_env() {
        let env = pair_sig_env();
        let obj = env.closure_of(&cn("Object")).unwrap();
        assert_eq!(obj.env(), &obj_sig_env());
        assert_eq!(obj, obj_sig_clos());
        let pair = env.closure_of(&cn("Pair")).unwrap();
        assert_eq!(pair.env(), &env);
        assert!(matches!(
            env.closure_of(&cn("Nope")),
            Err(EnvError::UnboundName(_))
        ));

        let c = ClassSignature::new(cn("C"), vec![], vec![], vec![]);
        let solo = SignatureEnvironment::validate(vec![c.clone()]).unwrap();
        let sc = solo.closure_of(&cn("C")).unwrap();
        assert_eq!(sc.env().len(), 1);
        assert_eq!(sc.root(), &c);
    }

    #[test]
    fn closure_constructor_checks_minimality() {
        assert_eq!(
            SignatureClosure::new(cn("Object"), pair_sig_env()),
            Err(ClosureError::NotMinimal(vec![cn("Pair")]))
        );
        assert!(SignatureClosure::new(cn("Pair"), pair_sig_env()).is_ok());
        assert_eq!(
            SignatureClosure::new(cn("Zed"), obj_sig_env()),
            Err(ClosureError::MissingRoot(cn("Zed")))
        );
    }

    #[test]
    fn signature_equality_ignores_order_but_not_params() {
        let f1 = FieldSignature::new(lb("first"), cn("Object"));
        let f2 = FieldSignature::new(lb("second"), cn("Object"));
        let ms = vec![MethodSignature::new(lb("equals"), vec![cn("Object")], cn("Boolean"))];
        let a = ClassSignature::new(cn("Pair"), vec![cn("Object")], vec![f1.clone(), f2.clone()], ms.clone());
        let b = ClassSignature::new(cn("Pair"), vec![cn("Object")], vec![f2, f1], ms);
        assert!(sig_equals(&a, &b));
        assert!(sig_equals(&obj_sig(), &obj_sig()));

        let m1 = MethodSignature::new(lb("m"), vec![cn("A"), cn("B")], cn("C"));
        let m2 = MethodSignature::new(lb("m"), vec![cn("B"), cn("A")], cn("C"));
        let x = ClassSignature::new(cn("X"), vec![], vec![], vec![m1]);
        let y = ClassSignature::new(cn("X"), vec![], vec![], vec![m2]);
        assert!(!sig_equals(&x, &y));

        let renamed = ClassSignature::new(cn("Other"), vec![], vec![], obj_sig().methods().to_vec());
        assert!(!sig_equals(&renamed, &obj_sig()));
    }

    #[test]
    fn extension_of_pair_envs() {
        let pair = pair_sig_env();
        let obj = obj_sig_env();
        assert!(extends_env(&pair, &obj));
        assert!(extends_env(&pair, &pair));
        assert!(!extends_env(&obj, &pair));
    }

    #[test]
    fn subsigning_of_pair_closures() {
        let pair = pair_sig_clos();
        let obj = obj_sig_clos();
        let boolean = bool_sig_clos();
        assert!(immediate_subsign(&pair, &obj));
        assert!(!immediate_subsign(&obj, &pair));
        assert!(immediate_subsign(&boolean, &obj));
        assert!(subsign(&pair, &obj));
        assert!(subsign(&pair, &pair));
        assert!(!subsign(&obj, &pair));
        assert!(!subsign(&pair, &boolean));
    }

    #[test]
    fn subsign_needs_matching_environment() {
        // same names, but Object carries a different member set
        let other_obj = ClassSignature::new(cn("Object"), vec![], vec![], vec![]);
        let env = SignatureEnvironment::validate(vec![other_obj]).unwrap();
        let odd = env.closure_of(&cn("Object")).unwrap();
        assert!(!subsign(&pair_sig_clos(), &odd));
        assert!(!subsign(&odd, &obj_sig_clos()));
    }

    #[test]
    fn shapes_of_pair_signatures() {
        let (f, m) = shapes(&pair_sig());
        assert_eq!(f.into_iter().collect::<Vec<_>>(), vec![lb("first"), lb("second")]);
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![lb("equals"), lb("swap")]);
        let (f, m) = shapes(&obj_sig());
        assert!(f.is_empty());
        assert_eq!(m.len(), 1);
        let (f, m) = shapes(&ClassSignature::new(cn("C"), vec![], vec![], vec![]));
        assert!(f.is_empty() && m.is_empty());
    }
}
