//! The verification suites behind `noop verify`.

use std::collections::BTreeSet;

use noop_core::obj::{
    check_finitary_projection, check_rank_proposition, raw_universe, ProjectionProperty,
    RawObject, UniverseConfig,
};
use noop_core::rec::{
    all_posets, basis_element, basis_index, check_rec_lub_preservation, check_rec_monotonic,
    label_at, label_seq, mk_record, rec_approx, rec_consistent, rec_lub, FiniteDomain,
    RecordFunction,
};
use noop_core::types::{check_inheritance_in, MemberLimits, MemberUniverse};
use noop_core::{EnvError, Label, SignatureEnvironment};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::load::{condition, CliError, CONDITIONS};
use crate::report::Report;

pub const DEFAULT_PROJECTION_BUDGET: usize = 100_000;
pub const LABEL_SEQ_LIMIT: u64 = 4096;
pub const MAX_POSET: usize = 4;
pub const MAX_LABELS: usize = 2;
pub const MAX_CHAIN: usize = 4;

pub fn env_conditions(errors: &[EnvError], subject: &str, sigs: usize) -> Report {
    let mut r = Report::new();
    for c in CONDITIONS {
        let hits: Vec<&EnvError> = errors.iter().filter(|e| condition(e) == c).collect();
        if hits.is_empty() {
            r.push(true, c, subject, format!("{sigs} signatures"));
        }
        for e in hits {
            r.push(false, c, e.class().as_str(), e.to_string());
        }
    }
    r
}

/// Subdomains of `big` obtained by restriction, bottom included, in order of
/// size then names.
pub fn subdomains(big: &FiniteDomain) -> Vec<FiniteDomain> {
    let names: Vec<String> = big.elements().iter().map(|e| e.to_string()).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (names.len() - 1)) {
        let keep: Vec<&str> = std::iter::once(names[0].as_str())
            .chain(
                names[1..]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, n)| n.as_str()),
            )
            .collect();
        if let Ok(d) = big.restrict(&keep) {
            if d.is_subdomain_of(big).is_ok() {
                out.push(d);
            }
        }
    }
    out.sort_by_key(|d| d.len());
    out
}

/// All posets with bottom of at most `max` elements.
pub fn small_posets(max: usize) -> Vec<FiniteDomain> {
    (1..=max).flat_map(all_posets).collect()
}

/// Every pair `small ⊆ big` of nested posets of size at most `max`.
pub fn nested_pairs(max: usize) -> Vec<(FiniteDomain, FiniteDomain)> {
    let mut out = Vec::new();
    for big in small_posets(max) {
        for small in subdomains(&big) {
            out.push((small, big.clone()));
        }
    }
    out
}

/// Strictly growing chains of subdomains of each poset, ending at it, of
/// length at most `max_len`.
pub fn nested_chains(max: usize, max_len: usize) -> Vec<Vec<FiniteDomain>> {
    fn grow(
        subs: &[FiniteDomain],
        chain: &mut Vec<FiniteDomain>,
        max_len: usize,
        top: &FiniteDomain,
        out: &mut Vec<Vec<FiniteDomain>>,
    ) {
        if chain.last().map(|d| d.len()) == Some(top.len()) {
            out.push(chain.clone());
            return;
        }
        if chain.len() == max_len {
            return;
        }
        for d in subs {
            let fits = match chain.last() {
                None => true,
                Some(prev) => {
                    prev.len() < d.len() && prev.elements().iter().all(|e| d.contains(e))
                }
            };
            if fits {
                chain.push(d.clone());
                grow(subs, chain, max_len, top, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    for top in small_posets(max) {
        let subs = subdomains(&top);
        grow(&subs, &mut Vec::new(), max_len, &top, &mut out);
    }
    out
}

pub fn labels(n: usize) -> Vec<Label> {
    (1..=n as u64).map(label_at).collect()
}

type Rec = RecordFunction<std::sync::Arc<str>>;

fn random_record(rng: &mut ChaCha8Rng, d: &FiniteDomain) -> Rec {
    if rng.gen_bool(0.1) {
        return RecordFunction::Bottom;
    }
    let mask: u8 = rng.gen_range(0..4);
    let entries = labels(MAX_LABELS)
        .into_iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .map(|(_, l)| (l, d.elements()[rng.gen_range(0..d.len())].clone()))
        .collect();
    mk_record(entries)
}

pub fn rec_laws(seed: u64) -> Report {
    let mut r = Report::new();
    let pairs = nested_pairs(MAX_POSET);
    let mut cex = Vec::new();
    let mut checks = 0;
    for (small, big) in &pairs {
        for n in 0..=MAX_LABELS {
            checks += 1;
            cex.extend(check_rec_monotonic(small, big, &labels(n)));
        }
    }
    let detail = match cex.first() {
        None => format!("{} domain pairs, {checks} checks", pairs.len()),
        Some(c) => format!("{} counterexamples, first: {c}", cex.len()),
    };
    r.push(cex.is_empty(), "rec-monotonic", "", detail);

    let chains = nested_chains(MAX_POSET, MAX_CHAIN);
    let mut bad = None;
    let mut checks = 0;
    for chain in &chains {
        for n in 0..=MAX_LABELS {
            checks += 1;
            match check_rec_lub_preservation(chain, &labels(n)) {
                Ok(rep) if rep.is_clean() => {}
                Ok(rep) => {
                    bad.get_or_insert(format!(
                        "chain of {} misses {} and adds {} records",
                        chain.len(),
                        rep.missing.len(),
                        rep.extra.len()
                    ));
                }
                Err(e) => {
                    bad.get_or_insert(format!("{e}"));
                }
            }
        }
    }
    let detail = bad.clone().unwrap_or(format!("{} chains, {checks} checks", chains.len()));
    r.push(bad.is_none(), "rec-lub-preservation", "", detail);

    // sampled order laws on every small poset
    let posets = small_posets(MAX_POSET);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 2000;
    let mut failure = None;
    for _ in 0..samples {
        let d = &posets[rng.gen_range(0..posets.len())];
        let (a, b, c) = (random_record(&mut rng, d), random_record(&mut rng, d), random_record(&mut rng, d));
        let ok = rec_approx(d, &a, &a)
            && (!(rec_approx(d, &a, &b) && rec_approx(d, &b, &a)) || a == b)
            && (!(rec_approx(d, &a, &b) && rec_approx(d, &b, &c)) || rec_approx(d, &a, &c))
            && match rec_lub(d, &a, &b) {
                Ok(l) => {
                    rec_consistent(d, &a, &b)
                        && rec_approx(d, &a, &l)
                        && rec_approx(d, &b, &l)
                        && (!(rec_approx(d, &a, &c) && rec_approx(d, &b, &c)) || rec_approx(d, &l, &c))
                }
                Err(_) => !rec_consistent(d, &a, &b),
            };
        if !ok && failure.is_none() {
            failure = Some(format!("at {a}, {b}, {c}"));
        }
    }
    let detail = failure.clone().unwrap_or(format!("{samples} samples, seed {seed}"));
    r.push(failure.is_none(), "rec-order-laws", "", detail);
    r
}

pub fn enumeration(prefix: u64) -> Report {
    let mut r = Report::new();
    let d = FiniteDomain::flat(3);
    let mut defined = 0u64;
    let mut first_bad = None;
    for i in 0..=prefix {
        let i = BigUint::from(i);
        if let Some(rec) = basis_element(&i, &d) {
            defined += 1;
            if basis_index(&rec, &d).as_ref() != Some(&i) && first_bad.is_none() {
                first_bad = Some(i);
            }
        }
    }
    let detail = match &first_bad {
        None => format!(
            "indices 0..={prefix}: {defined} defined and inverted, {} undefined",
            prefix + 1 - defined
        ),
        Some(i) => format!("index {i} does not round-trip"),
    };
    r.push(first_bad.is_none(), "basis-index-of-element", "flat3", detail);

    // the other direction over every record with labels a..d
    let mut count = 0;
    let mut bad = None;
    let ls = labels(4);
    for mask in 0u32..16 {
        let chosen: Vec<Label> =
            ls.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, l)| l.clone()).collect();
        let total = 3usize.pow(chosen.len() as u32);
        for code in 0..total {
            let mut c = code;
            let entries = chosen
                .iter()
                .map(|l| {
                    let v = d.elements()[c % 3].clone();
                    c /= 3;
                    (l.clone(), v)
                })
                .collect();
            let rec = mk_record(entries);
            count += 1;
            let back = basis_index(&rec, &d).and_then(|i| basis_element(&i, &d));
            if back.as_ref() != Some(&rec) && bad.is_none() {
                bad = Some(rec);
            }
        }
    }
    let detail = match &bad {
        None => format!("{count} records over labels a..d"),
        Some(rec) => format!("{rec} does not round-trip"),
    };
    r.push(bad.is_none(), "basis-element-of-index", "flat3", detail);

    let mut seen = BTreeSet::new();
    let mut injective = true;
    let mut popcount = true;
    for n in 0..=LABEL_SEQ_LIMIT {
        let s = label_seq(&BigUint::from(n));
        popcount &= s.len() as u32 == n.count_ones();
        injective &= seen.insert(s);
    }
    r.push(injective, "label-seq-injective", "", format!("n = 0..={LABEL_SEQ_LIMIT}"));
    r.push(popcount, "label-seq-popcount", "", format!("n = 0..={LABEL_SEQ_LIMIT}"));
    r
}

pub fn projection_universe(
    env: &SignatureEnvironment,
    rank: usize,
    budget: usize,
) -> Result<Vec<RawObject>, CliError> {
    let cfg = UniverseConfig {
        rank,
        max_steps: 1,
        budget,
        shape_variants: true,
    };
    Ok(raw_universe(env, &cfg)?)
}

pub fn projection(universe: &[RawObject]) -> Report {
    let mut r = Report::new();
    let rep = check_finitary_projection(universe);
    for p in ProjectionProperty::ALL {
        let first = rep.failures.iter().find(|f| f.property == p);
        let pair = matches!(p, ProjectionProperty::ClosestValid | ProjectionProperty::Monotone);
        let detail = match first {
            None if pair => format!("{} objects, {} ordered pairs", rep.objects, rep.pairs),
            None => format!("{} objects", rep.objects),
            Some(f) => match &f.other {
                Some(o) => format!("{} failures, first at {} below {}", rep.failures_of(p), o, f.object),
                None => format!("{} failures, first at {}", rep.failures_of(p), f.object),
            },
        };
        r.push(first.is_none(), p.name(), "", detail);
    }
    r
}

pub fn rank(universe: &[RawObject]) -> Report {
    let mut r = Report::new();
    let rep = check_rank_proposition(universe);
    let detail = match rep.counterexamples.first() {
        None => format!("{} objects, {} cross-rank pairs", universe.len(), rep.pairs),
        Some((lo, hi)) => format!("{} counterexamples, first: {hi} below {lo}", rep.counterexamples.len()),
    };
    r.push(rep.counterexamples.is_empty(), "rank-proposition", "", detail);
    r
}

pub fn theorem(
    env: &SignatureEnvironment,
    rank: usize,
    limits: MemberLimits,
) -> Result<Report, CliError> {
    let u = MemberUniverse::build(env, rank, limits)?;
    let mut r = Report::new();
    let cs = env.closures();
    for a in &cs {
        for b in &cs {
            let t = check_inheritance_in(&u, a, b);
            let subject = format!("{},{}", a.root_name(), b.root_name());
            let detail = match (t.subsign, &t.counterexample) {
                (true, None) => format!("forward: {} members of {} are members of {}", t.checked, a, b),
                (false, Some(o)) if o.closure() == Some(a) && o.triple().is_some() => {
                    format!("reverse: witness of {a} is not a member of {b}")
                }
                (false, Some(o)) => format!("reverse: {o} is not a member of {b}"),
                (true, Some(o)) => format!("forward fails at {o}"),
                (false, None) => format!("not subsigning, yet all {} checked members are included", t.checked),
            };
            r.push(t.agrees(), "inheritance-is-subtyping", &subject, detail);
        }
    }
    Ok(r)
}
