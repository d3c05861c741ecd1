//! Finite element domains used as oracles: explicit posets with bottom, and
//! the infinite flat domain of naturals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Domain, EffectiveDomain};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainError {
    Empty,
    DuplicateElement(String),
    UnknownElement(String),
    /// The order relation has a cycle through these two elements.
    NotAntisymmetric(String, String),
    NoBottom,
    /// The pair has upper bounds but no least one.
    MissingLub(String, String),
    BottomsDiffer(String, String),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::Empty => f.write_str("a domain needs at least a bottom element"),
            DomainError::DuplicateElement(e) => write!(f, "element `{e}` listed twice"),
            DomainError::UnknownElement(e) => write!(f, "unknown element `{e}`"),
            DomainError::NotAntisymmetric(a, b) => {
                write!(f, "`{a}` and `{b}` approximate each other")
            }
            DomainError::NoBottom => f.write_str("no least element"),
            DomainError::MissingLub(a, b) => {
                write!(f, "`{a}` and `{b}` have upper bounds but no least one")
            }
            DomainError::BottomsDiffer(a, b) => write!(f, "bottoms `{a}` and `{b}` differ"),
        }
    }
}

/// Why one finite domain is not a subdomain of another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubdomainViolation {
    BottomDiffers,
    NotIncluded(Arc<str>),
    ApproxDisagrees(Arc<str>, Arc<str>),
    ConsistencyDisagrees(Arc<str>, Arc<str>),
    LubDisagrees(Arc<str>, Arc<str>),
}

impl fmt::Display for SubdomainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubdomainViolation::BottomDiffers => f.write_str("bottom elements differ"),
            SubdomainViolation::NotIncluded(e) => write!(f, "`{e}` is missing from the larger domain"),
            SubdomainViolation::ApproxDisagrees(a, b) => write!(f, "order on ({a}, {b}) differs"),
            SubdomainViolation::ConsistencyDisagrees(a, b) => {
                write!(f, "consistency of ({a}, {b}) differs")
            }
            SubdomainViolation::LubDisagrees(a, b) => write!(f, "lub of ({a}, {b}) differs"),
        }
    }
}

/// A finite poset with a least element in which every bounded pair has a
/// lub. Elements are named; index 0 is bottom and the enumeration follows
/// index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDomain {
    names: Vec<Arc<str>>,
    index: BTreeMap<Arc<str>, usize>,
    le: Vec<Vec<bool>>,
    lubs: Vec<Vec<Option<usize>>>,
}

impl FiniteDomain {
    /// Builds the domain from a (not necessarily transitive) set of
    /// `below ⊑ above` pairs.
    pub fn from_covers(names: &[&str], covers: &[(&str, &str)]) -> Result<Self, DomainError> {
        let names: Vec<Arc<str>> = names.iter().map(|n| Arc::from(*n)).collect();
        let mut pairs = Vec::new();
        for (a, b) in covers {
            let ia = position(&names, a)?;
            let ib = position(&names, b)?;
            pairs.push((ia, ib));
        }
        Self::build(names, &pairs)
    }

    /// `d0, d1, ...` with `d0` below everything else and nothing else related.
    pub fn flat(n: usize) -> Self {
        let names = numbered(n.max(1));
        let pairs: Vec<_> = (1..names.len()).map(|i| (0, i)).collect();
        Self::build(names, &pairs).expect("flat domains are well formed")
    }

    /// `d0 ⊑ d1 ⊑ ... ⊑ d(n-1)`.
    pub fn chain(n: usize) -> Self {
        let names = numbered(n.max(1));
        let pairs: Vec<_> = (1..names.len()).map(|i| (i - 1, i)).collect();
        Self::build(names, &pairs).expect("chains are well formed")
    }

    fn build(names: Vec<Arc<str>>, pairs: &[(usize, usize)]) -> Result<Self, DomainError> {
        if names.is_empty() {
            return Err(DomainError::Empty);
        }
        let n = names.len();
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(DomainError::DuplicateElement(String::from(&**name)));
            }
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if le[i][j] && le[j][i] {
                    return Err(DomainError::NotAntisymmetric(
                        String::from(&*names[i]),
                        String::from(&*names[j]),
                    ));
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|j| le[b][j]))
            .ok_or(DomainError::NoBottom)?;
        // move bottom to the front, keeping the rest in order
        let order: Vec<usize> = core::iter::once(bottom)
            .chain((0..n).filter(|&i| i != bottom))
            .collect();
        let names: Vec<Arc<str>> = order.iter().map(|&i| names[i].clone()).collect();
        let le: Vec<Vec<bool>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| le[i][j]).collect())
            .collect();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        let mut lubs = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                let ups: Vec<usize> = (0..n).filter(|&c| le[a][c] && le[b][c]).collect();
                if ups.is_empty() {
                    continue;
                }
                match ups.iter().find(|&&u| ups.iter().all(|&v| le[u][v])) {
                    Some(&u) => lubs[a][b] = Some(u),
                    None => {
                        return Err(DomainError::MissingLub(
                            String::from(&*names[a]),
                            String::from(&*names[b]),
                        ))
                    }
                }
            }
        }
        Ok(FiniteDomain {
            names,
            index,
            le,
            lubs,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Elements in enumeration order, bottom first.
    pub fn elements(&self) -> &[Arc<str>] {
        &self.names
    }

    pub fn elem(&self, name: &str) -> Option<Arc<str>> {
        self.index.get_key_value(name).map(|(k, _)| k.clone())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    fn idx(&self, e: &Arc<str>) -> usize {
        *self
            .index
            .get(e)
            .unwrap_or_else(|| panic!("`{e}` is not an element of this domain"))
    }

    /// Pairs `(a, b)` with `a ⊑ b`, `a ≠ b`.
    pub fn order_pairs(&self) -> Vec<(Arc<str>, Arc<str>)> {
        let mut out = Vec::new();
        for (i, row) in self.le.iter().enumerate() {
            for (j, &le) in row.iter().enumerate() {
                if le && i != j {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    /// The induced sub-poset on `keep`, which must contain bottom.
    pub fn restrict(&self, keep: &[&str]) -> Result<Self, DomainError> {
        let mut names = Vec::new();
        for k in keep {
            let i = *self
                .index
                .get(*k)
                .ok_or_else(|| DomainError::UnknownElement(String::from(*k)))?;
            names.push(i);
        }
        let pairs: Vec<(usize, usize)> = (0..names.len())
            .flat_map(|a| (0..names.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| self.le[names[a]][names[b]])
            .collect();
        let names = names.iter().map(|&i| self.names[i].clone()).collect();
        Self::build(names, &pairs)
    }

    /// The poset generated by all elements and orderings of `domains`.
    pub fn union(domains: &[FiniteDomain]) -> Result<Self, DomainError> {
        let first = domains.first().ok_or(DomainError::Empty)?;
        let mut names: Vec<Arc<str>> = Vec::new();
        for d in domains {
            if d.names[0] != first.names[0] {
                return Err(DomainError::BottomsDiffer(
                    String::from(&*first.names[0]),
                    String::from(&*d.names[0]),
                ));
            }
            for n in &d.names {
                if !names.contains(n) {
                    names.push(n.clone());
                }
            }
        }
        let mut pairs = Vec::new();
        for d in domains {
            for (a, b) in d.order_pairs() {
                let ia = names.iter().position(|n| *n == a).expect("collected");
                let ib = names.iter().position(|n| *n == b).expect("collected");
                pairs.push((ia, ib));
            }
        }
        Self::build(names, &pairs)
    }

    /// Checks the subdomain premise against `big`: shared bottom, inclusion,
    /// and agreement of order, consistency and lubs on this domain's
    /// elements.
    pub fn is_subdomain_of(&self, big: &FiniteDomain) -> Result<(), SubdomainViolation> {
        if self.names[0] != big.names[0] {
            return Err(SubdomainViolation::BottomDiffers);
        }
        for n in &self.names {
            if !big.contains(n) {
                return Err(SubdomainViolation::NotIncluded(n.clone()));
            }
        }
        for a in &self.names {
            for b in &self.names {
                if self.approx(a, b) != big.approx(a, b) {
                    return Err(SubdomainViolation::ApproxDisagrees(a.clone(), b.clone()));
                }
                if self.consistent(a, b) != big.consistent(a, b) {
                    return Err(SubdomainViolation::ConsistencyDisagrees(a.clone(), b.clone()));
                }
                if self.lub(a, b) != big.lub(a, b) {
                    return Err(SubdomainViolation::LubDisagrees(a.clone(), b.clone()));
                }
            }
        }
        Ok(())
    }
}

fn position(names: &[Arc<str>], name: &str) -> Result<usize, DomainError> {
    names
        .iter()
        .position(|n| &**n == name)
        .ok_or_else(|| DomainError::UnknownElement(String::from(name)))
}

fn numbered(n: usize) -> Vec<Arc<str>> {
    (0..n).map(|i| Arc::from(format!("d{i}").as_str())).collect()
}

impl Domain for FiniteDomain {
    type Elem = Arc<str>;

    fn bottom(&self) -> Arc<str> {
        self.names[0].clone()
    }

    fn approx(&self, a: &Arc<str>, b: &Arc<str>) -> bool {
        self.le[self.idx(a)][self.idx(b)]
    }

    fn consistent(&self, a: &Arc<str>, b: &Arc<str>) -> bool {
        self.lubs[self.idx(a)][self.idx(b)].is_some()
    }

    fn lub(&self, a: &Arc<str>, b: &Arc<str>) -> Option<Arc<str>> {
        self.lubs[self.idx(a)][self.idx(b)].map(|i| self.names[i].clone())
    }
}

impl EffectiveDomain for FiniteDomain {
    fn enumerate(&self, index: &BigUint) -> Option<Arc<str>> {
        index.to_usize().and_then(|i| self.names.get(i)).cloned()
    }

    fn index_of(&self, elem: &Arc<str>) -> Option<BigUint> {
        self.index.get(elem).map(|&i| BigUint::from(i))
    }
}

/// Every poset with bottom on `d0..d(n-1)` (bottom `d0`) in which bounded
/// pairs have lubs. Labelled, so isomorphic copies are all present.
pub fn all_posets(n: usize) -> Vec<FiniteDomain> {
    if n == 0 {
        return Vec::new();
    }
    let names = numbered(n);
    let strict: Vec<(usize, usize)> = (1..n)
        .flat_map(|a| (1..n).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << strict.len()) {
        let chosen: Vec<(usize, usize)> = strict
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .collect();
        // only relations that are already transitive and antisymmetric, so
        // each poset is produced once
        let has = |a: usize, b: usize| chosen.contains(&(a, b));
        let antisymmetric = chosen.iter().all(|&(a, b)| !has(b, a));
        let transitive = chosen
            .iter()
            .all(|&(a, b)| chosen.iter().all(|&(c, d)| c != b || has(a, d)));
        if !(antisymmetric && transitive) {
            continue;
        }
        let mut pairs = chosen;
        pairs.extend((1..n).map(|i| (0, i)));
        if let Ok(d) = FiniteDomain::build(names.clone(), &pairs) {
            out.push(d);
        }
    }
    out
}

/// The flat domain over the naturals, `0` as bottom. Elements print as
/// `d<n>`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NatFlat;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(pub BigUint);

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

impl Domain for NatFlat {
    type Elem = Nat;

    fn bottom(&self) -> Nat {
        Nat(BigUint::zero())
    }

    fn approx(&self, a: &Nat, b: &Nat) -> bool {
        a.0.is_zero() || a == b
    }

    fn consistent(&self, a: &Nat, b: &Nat) -> bool {
        a.0.is_zero() || b.0.is_zero() || a == b
    }

    fn lub(&self, a: &Nat, b: &Nat) -> Option<Nat> {
        if a.0.is_zero() {
            Some(b.clone())
        } else if b.0.is_zero() || a == b {
            Some(a.clone())
        } else {
            None
        }
    }
}

impl EffectiveDomain for NatFlat {
    fn enumerate(&self, index: &BigUint) -> Option<Nat> {
        Some(Nat(index.clone()))
    }

    fn index_of(&self, elem: &Nat) -> Option<BigUint> {
        Some(elem.0.clone())
    }
}
