//! Class types: the valid objects whose closure subsigns a given closure,
//! together with bottom.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::obj::{
    arg_sequences, method_tables, validate, BudgetExceeded, FiniteMethod, RawObject, Violation,
};
use crate::rec::Record;
use crate::sig::{subsign, Label, SignatureClosure, SignatureEnvironment};

pub use crate::obj::witness;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotAValidObject(pub Violation);

impl fmt::Display for NotAValidObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a valid object: {}", self.0)
    }
}

/// Whether `o` belongs to the class type of `sc`. Membership is only
/// defined for valid objects.
pub fn member_of(o: &RawObject, sc: &SignatureClosure) -> Result<bool, NotAValidObject> {
    validate(o).map_err(NotAValidObject)?;
    Ok(match o {
        RawObject::Bottom => true,
        RawObject::Obj(t) => subsign(&t.closure, sc),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemberLimits {
    pub max_objects: usize,
    pub max_steps: usize,
}

impl Default for MemberLimits {
    fn default() -> Self {
        MemberLimits {
            max_objects: 10_000,
            max_steps: 2,
        }
    }
}

/// All valid objects over the closures of an environment up to some rank,
/// with method tables of bounded size.
#[derive(Debug, Clone)]
pub struct MemberUniverse {
    objects: Vec<RawObject>,
}

impl MemberUniverse {
    /// Rank 1 holds the witnesses. Rank `k` combines objects of lower rank:
    /// field values conforming to their declared types, and step tables whose
    /// arguments conform (self to the object's own closure) and whose results
    /// are proper and conforming.
    pub fn build(
        env: &SignatureEnvironment,
        rank: usize,
        limits: MemberLimits,
    ) -> Result<Self, BudgetExceeded> {
        let closures = env.closures();
        let mut all: BTreeSet<RawObject> = BTreeSet::new();
        all.insert(RawObject::Bottom);
        let over = |n: u128| BudgetExceeded {
            needed: n,
            budget: limits.max_objects,
        };
        if rank >= 1 {
            all.extend(closures.iter().map(witness));
            if all.len() > limits.max_objects {
                return Err(over(all.len() as u128));
            }
        }
        for _ in 2..=rank {
            let pool: Vec<RawObject> = all.iter().cloned().collect();
            let conforming = |decl: &SignatureClosure| -> Vec<RawObject> {
                pool.iter()
                    .filter(|o| o.closure().map_or(true, |c| subsign(c, decl)))
                    .cloned()
                    .collect()
            };
            let mut fresh = Vec::new();
            let mut used = all.len() as u128;
            for sc in &closures {
                let sig = sc.root();
                let mut field_pools = Vec::new();
                for f in sig.fields() {
                    let decl = sc.closure_of(&f.type_name).expect("validated env");
                    field_pools.push(conforming(&decl));
                }
                let mut tables: Vec<(Label, Vec<FiniteMethod>)> = Vec::new();
                for m in sig.methods() {
                    let mut arg_pools = vec![conforming(sc)];
                    for p in &m.param_types {
                        arg_pools.push(conforming(&sc.closure_of(p).expect("validated env")));
                    }
                    let out = conforming(&sc.closure_of(&m.return_type).expect("validated env"));
                    let ts = method_tables(&arg_sequences(&arg_pools), &out, limits.max_steps);
                    tables.push((m.name.clone(), ts));
                }
                let count = field_pools
                    .iter()
                    .map(|p| p.len() as u128)
                    .chain(tables.iter().map(|(_, t)| t.len() as u128))
                    .fold(1u128, |a, b| a.saturating_mul(b));
                used = used.saturating_add(count);
                if used > limits.max_objects as u128 {
                    return Err(over(used));
                }
                let labels: Vec<Label> = sig.fields().iter().map(|f| f.name.clone()).collect();
                let method_pools: Vec<Vec<FiniteMethod>> =
                    tables.iter().map(|(_, t)| t.clone()).collect();
                for values in arg_sequences(&field_pools) {
                    let fields: Record<RawObject> = labels.iter().cloned().zip(values).collect();
                    for ms in product(&method_pools) {
                        let methods: Record<FiniteMethod> =
                            tables.iter().map(|(l, _)| l.clone()).zip(ms).collect();
                        fresh.push(RawObject::new(sc.clone(), fields.clone(), methods));
                    }
                }
            }
            all.extend(fresh);
        }
        Ok(MemberUniverse {
            objects: all.into_iter().collect(),
        })
    }

    pub fn objects(&self) -> &[RawObject] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Members of the class type of `sc`, sorted by their printed form.
    pub fn members(&self, sc: &SignatureClosure) -> Vec<RawObject> {
        let mut out: Vec<RawObject> = self
            .objects
            .iter()
            .filter(|o| o.closure().map_or(true, |c| subsign(c, sc)))
            .cloned()
            .collect();
        out.sort_by_cached_key(|o| o.to_string());
        out
    }
}

fn product<T: Clone>(pools: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::with_capacity(acc.len() * pool.len());
        for prefix in &acc {
            for v in pool {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}

/// The members of `sc` up to `rank`, built over `env`.
pub fn enumerate_members(
    env: &SignatureEnvironment,
    sc: &SignatureClosure,
    rank: usize,
    limits: MemberLimits,
) -> Result<Vec<RawObject>, BudgetExceeded> {
    Ok(MemberUniverse::build(env, rank, limits)?.members(sc))
}

/// Result of comparing subsigning with class type inclusion for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremOutcome {
    pub subsign: bool,
    /// Every enumerated member of the first type, and its witness, is a
    /// member of the second.
    pub included: bool,
    pub checked: usize,
    /// A member of the first type outside the second.
    pub counterexample: Option<RawObject>,
}

impl TheoremOutcome {
    pub fn agrees(&self) -> bool {
        self.subsign == self.included
    }
}

/// Checks that `sc1 ⊴ sc2` exactly when the class type of `sc1` is included
/// in that of `sc2`, over the members of `sc1` in `universe` plus the
/// witness of `sc1`.
pub fn check_inheritance_in(
    universe: &MemberUniverse,
    sc1: &SignatureClosure,
    sc2: &SignatureClosure,
) -> TheoremOutcome {
    let mut checked = 0;
    let mut counterexample = None;
    let w = witness(sc1);
    let candidates = universe.members(sc1);
    for o in core::iter::once(&w).chain(candidates.iter()) {
        checked += 1;
        let inside = member_of(o, sc2).expect("enumerated objects are valid");
        if !inside && counterexample.is_none() {
            counterexample = Some(o.clone());
        }
    }
    TheoremOutcome {
        subsign: subsign(sc1, sc2),
        included: counterexample.is_none(),
        checked,
        counterexample,
    }
}

pub fn check_inheritance_is_subtyping(
    env: &SignatureEnvironment,
    sc1: &SignatureClosure,
    sc2: &SignatureClosure,
    rank: usize,
    limits: MemberLimits,
) -> Result<TheoremOutcome, BudgetExceeded> {
    let u = MemberUniverse::build(env, rank, limits)?;
    Ok(check_inheritance_in(&u, sc1, sc2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::obj::{rank as obj_rank, valid};

    #[test]
    fn witness_membership() {
        let (o, b, p) = (obj_sig_clos(), bool_sig_clos(), pair_sig_clos());
        assert!(member_of(&witness(&b), &o).unwrap());
        assert!(!member_of(&witness(&o), &b).unwrap());
        assert!(!member_of(&witness(&p), &b).unwrap());
        assert!(member_of(&RawObject::Bottom, &p).unwrap());
        let broken = RawObject::new(o.clone(), Record::empty(), Record::empty());
        assert!(member_of(&broken, &o).is_err());
    }

    #[test]
    fn universe_objects_are_valid() {
        let env = pair_sig_env();
        let u = MemberUniverse::build(&env, 2, MemberLimits::default()).unwrap();
        assert!(u.objects().iter().all(valid));
        assert!(u.objects().iter().all(|o| obj_rank(o) <= 2));
        let tiny = MemberLimits {
            max_objects: 3,
            ..MemberLimits::default()
        };
        assert!(MemberUniverse::build(&env, 2, tiny).is_err());
    }

    #[test]
    fn members_sorted_and_closed_under_subsign() {
        let env = pair_sig_env();
        let u = MemberUniverse::build(&env, 2, MemberLimits::default()).unwrap();
        let objs = u.members(&obj_sig_clos());
        let bools = u.members(&bool_sig_clos());
        assert!(bools.len() < objs.len());
        assert!(bools.iter().all(|b| objs.contains(b)));
        let keys: Vec<_> = objs.iter().map(|o| o.to_string()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn theorem_on_pair_env() {
        let env = pair_sig_env();
        let u = MemberUniverse::build(&env, 2, MemberLimits::default()).unwrap();
        for a in pair_closures() {
            for b in pair_closures() {
                let t = check_inheritance_in(&u, &a, &b);
                assert!(t.agrees(), "{} vs {}", a.root_name(), b.root_name());
            }
        }
        let t = check_inheritance_in(&u, &obj_sig_clos(), &bool_sig_clos());
        assert_eq!(t.counterexample, Some(witness(&obj_sig_clos())));
    }
}
