//! Bounded universes of raw objects, valid or not.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{witness, FiniteMethod, RawObject, Step};
use crate::rec::Record;
use crate::sig::{Label, SignatureClosure, SignatureEnvironment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub needed: u128,
    pub budget: usize,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "enumeration needs at least {} objects but the budget is {}",
            self.needed, self.budget
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniverseConfig {
    pub rank: usize,
    pub max_steps: usize,
    pub budget: usize,
    /// Include rank-1 objects whose shapes disagree with their closure.
    pub shape_variants: bool,
}

impl Default for UniverseConfig {
    fn default() -> Self {
        UniverseConfig {
            rank: 2,
            max_steps: 1,
            budget: 100_000,
            shape_variants: true,
        }
    }
}

fn fresh_label<'a, I: Iterator<Item = &'a Label>>(taken: I) -> Label {
    let taken: BTreeSet<&Label> = taken.collect();
    let mut name = String::from("stray");
    loop {
        let l = Label::new(&name).expect("identifier");
        if !taken.contains(&l) {
            return l;
        }
        name.push('_');
    }
}

/// Witness-like objects of `sc` with one member dropped or one extra member
/// added; none of them is valid.
pub fn shape_variants(sc: &SignatureClosure) -> Vec<RawObject> {
    let w = witness(sc);
    let t = w.triple().expect("witness is proper");
    let mut out = Vec::new();
    for l in t.fields.labels() {
        let fields: Record<RawObject> = t
            .fields
            .iter()
            .filter(|(k, _)| *k != l)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        out.push(RawObject::new(sc.clone(), fields, t.methods.clone()));
    }
    for l in t.methods.labels() {
        let methods: Record<FiniteMethod> = t
            .methods
            .iter()
            .filter(|(k, _)| *k != l)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        out.push(RawObject::new(sc.clone(), t.fields.clone(), methods));
    }
    let extra = fresh_label(t.fields.labels());
    let mut fields = t.fields.clone().into_entries();
    fields.insert(extra, RawObject::Bottom);
    out.push(RawObject::new(sc.clone(), Record::new(fields), t.methods.clone()));
    let extra = fresh_label(t.methods.labels());
    let mut methods = t.methods.clone().into_entries();
    methods.insert(extra, FiniteMethod::bottom());
    out.push(RawObject::new(sc.clone(), t.fields.clone(), Record::new(methods)));
    out
}

/// Cartesian product of per-position pools.
pub fn arg_sequences(pools: &[Vec<RawObject>]) -> Vec<Vec<RawObject>> {
    let mut acc: Vec<Vec<RawObject>> = vec![Vec::new()];
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

/// The bottom method and every consistent table of at most `max_steps`
/// steps with arguments from `args` and proper results from `results`, in
/// canonical form without duplicates.
pub fn method_tables(
    args: &[Vec<RawObject>],
    results: &[RawObject],
    max_steps: usize,
) -> Vec<FiniteMethod> {
    let steps: Vec<Step> = args
        .iter()
        .flat_map(|a| {
            results
                .iter()
                .filter(|r| !r.is_bottom())
                .map(move |r| Step::new(a.clone(), r.clone()))
        })
        .collect();
    let mut out = BTreeSet::new();
    out.insert(FiniteMethod::bottom());
    let mut chosen = Vec::new();
    fn go(
        steps: &[Step],
        from: usize,
        left: usize,
        chosen: &mut Vec<Step>,
        out: &mut BTreeSet<FiniteMethod>,
    ) {
        if left == 0 {
            return;
        }
        for i in from..steps.len() {
            chosen.push(steps[i].clone());
            if let Ok(m) = FiniteMethod::from_steps(chosen.iter().cloned()) {
                out.insert(m);
                go(steps, i + 1, left - 1, chosen, out);
            }
            chosen.pop();
        }
    }
    go(&steps, 0, max_steps, &mut chosen, &mut out);
    out.into_iter().collect()
}

/// Objects of each closure of `env` with the declared shape, field values
/// from `pool` and method tables over `pool`, regardless of types.
fn level(
    env: &SignatureEnvironment,
    closures: &[SignatureClosure],
    pool: &[RawObject],
    max_steps: usize,
    budget: usize,
    used: &mut u128,
) -> Result<Vec<RawObject>, BudgetExceeded> {
    let results: Vec<RawObject> = pool.iter().filter(|o| !o.is_bottom()).cloned().collect();
    let mut plans = Vec::new();
    for sc in closures {
        let sig = env.get(sc.root_name()).expect("closure of env");
        let mut count: u128 = 1;
        for _ in sig.fields() {
            count = count.saturating_mul(pool.len() as u128);
        }
        let mut tables = Vec::new();
        for m in sig.methods() {
            let pools = vec![pool.to_vec(); m.param_types.len() + 1];
            let t = method_tables(&arg_sequences(&pools), &results, max_steps);
            count = count.saturating_mul(t.len() as u128);
            tables.push((m.name.clone(), t));
        }
        *used = used.saturating_add(count);
        if *used > budget as u128 {
            return Err(BudgetExceeded {
                needed: *used,
                budget,
            });
        }
        plans.push((sc, tables));
    }
    let mut out = Vec::new();
    for (sc, tables) in plans {
        let sig = sc.root();
        let field_pools: Vec<Vec<RawObject>> = sig.fields().iter().map(|_| pool.to_vec()).collect();
        for values in arg_sequences(&field_pools) {
            let fields: Record<RawObject> = sig
                .fields()
                .iter()
                .map(|f| f.name.clone())
                .zip(values)
                .collect();
            let mut method_choices: Vec<Vec<(Label, FiniteMethod)>> = vec![Vec::new()];
            for (l, ts) in &tables {
                let mut next = Vec::with_capacity(method_choices.len() * ts.len());
                for prefix in &method_choices {
                    for t in ts {
                        let mut p = prefix.clone();
                        p.push((l.clone(), t.clone()));
                        next.push(p);
                    }
                }
                method_choices = next;
            }
            for ms in method_choices {
                out.push(RawObject::new(sc.clone(), fields.clone(), ms.into_iter().collect()));
            }
        }
    }
    Ok(out)
}

/// A bounded universe over the closures of `env`.
///
/// Rank 1 holds every witness and, optionally, the shape variants of each
/// witness. Rank 2 combines a small seed (bottom, the witnesses and one
/// ill-shaped object) into objects of declared shape with method tables of
/// at most `max_steps` steps; higher ranks also draw on the level below.
/// Step arguments come from the same pools, so their rank stays below the
/// object's.
pub fn raw_universe(
    env: &SignatureEnvironment,
    cfg: &UniverseConfig,
) -> Result<Vec<RawObject>, BudgetExceeded> {
    let closures = env.closures();
    let mut used: u128 = 1;
    let mut all = BTreeSet::new();
    all.insert(RawObject::Bottom);
    if cfg.rank == 0 {
        return Ok(all.into_iter().collect());
    }
    let witnesses: Vec<RawObject> = closures.iter().map(witness).collect();
    let variants: Vec<RawObject> = if cfg.shape_variants {
        closures.iter().flat_map(shape_variants).collect()
    } else {
        Vec::new()
    };
    used = used.saturating_add((witnesses.len() + variants.len()) as u128);
    if used > cfg.budget as u128 {
        return Err(BudgetExceeded {
            needed: used,
            budget: cfg.budget,
        });
    }
    all.extend(witnesses.iter().cloned());
    all.extend(variants.iter().cloned());

    let mut pool = vec![RawObject::Bottom];
    pool.extend(witnesses);
    // prefer an object missing a field, the most common authoring slip
    let closures_with_fields = closures.iter().filter(|c| !c.root().fields().is_empty()).count();
    let ill = if closures_with_fields > 0 {
        variants.iter().find(|v| {
            let t = v.triple().expect("proper");
            t.fields.len() < t.closure.root().fields().len()
        })
    } else {
        variants.first()
    };
    pool.extend(ill.cloned());

    for k in 2..=cfg.rank {
        let objs = level(env, &closures, &pool, cfg.max_steps, cfg.budget, &mut used)?;
        if k < cfg.rank {
            pool.extend(objs.iter().cloned());
        }
        all.extend(objs);
    }
    Ok(all.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::obj::{rank, valid};

    #[test]
    fn variants_are_invalid() {
        for sc in pair_closures() {
            let vs = shape_variants(&sc);
            let t = sc.root();
            assert_eq!(vs.len(), t.fields().len() + t.methods().len() + 2);
            assert!(vs.iter().all(|v| !valid(v)));
        }
    }

    #[test]
    fn tables_from_small_pools() {
        let wo = witness(&obj_sig_clos());
        let wb = witness(&bool_sig_clos());
        let pool = vec![RawObject::Bottom, wo.clone()];
        let args = arg_sequences(&[pool.clone()]);
        assert_eq!(args.len(), 2);
        let one = method_tables(&args, &[wo.clone(), wb.clone()], 1);
        // bottom plus 2 arguments × 2 results
        assert_eq!(one.len(), 5);
        let two = method_tables(&args, &[wo, wb], 2);
        // adds [⊥]↘x with [wo]↘y only when x ⊑ y, which is redundant, so
        // the only new tables come from incomparable pairs: none here
        assert_eq!(two.len(), 5);
    }

    #[test]
    fn pair_universe_counts() {
        let env = pair_sig_env();
        let cfg = UniverseConfig::default();
        let u = raw_universe(&env, &cfg).unwrap();
        // seed: ⊥, 3 witnesses, 1 ill-shaped Pair; 4 proper results
        // Object, Boolean: equals tables 1 + 25·4; Pair: 25 field choices,
        // equals 101, swap 1 + 5·4
        let rank2 = 101 + 101 + 25 * 101 * 21;
        // rank-2 level repeats the 3 witnesses
        let rank1 = 3 + (3 + 3 + 6);
        assert_eq!(u.len(), 1 + rank1 + rank2 - 3);
        assert!(u.iter().all(|o| rank(o) <= 2));
        let small = UniverseConfig { budget: 1000, ..cfg };
        assert!(raw_universe(&env, &small).is_err());
        let zero = UniverseConfig { rank: 0, ..cfg };
        assert_eq!(raw_universe(&env, &zero).unwrap(), vec![RawObject::Bottom]);
    }
}
