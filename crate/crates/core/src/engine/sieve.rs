//! The excluded-minor sieve, base-list verification, the circuit-hyperplane
//! hunt and the top-level driver.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::class::ClassSpec;
use super::filter::isomorph_filter_in_memory;
use super::generate::{extension_candidates, generate_level, splice_candidates, EngineConfig, IsoIndex};
use super::store::LevelStore;
use crate::error::Result;
use crate::field::FieldSpec;
use crate::linrep::{all_carrier_extensions, find_confined_rep, find_rep, ExtensionContext};
use crate::matroid::{catalog, delta_y_closure, has_minor_iso, BasisMatroid, MinorCache};

/// Known excluded minors that can occur in carrier-representable matroids.
/// Minors of carrier-representable matroids are carrier-representable, so
/// the others never need a minor test against a carrier-built candidate.
pub fn carrier_relevant(known: &[BasisMatroid], carrier: &FieldSpec) -> Vec<BasisMatroid> {
    let mut out: Vec<BasisMatroid> = known.iter().filter(|x| find_rep(x, carrier).is_some()).cloned().collect();
    out.sort_by_key(|x| (x.n(), x.basis_count()));
    out
}

/// Closes a set under duality and Delta-Y equivalence, up to isomorphism.
pub fn delta_dual_closure(ms: &[BasisMatroid]) -> Vec<BasisMatroid> {
    let all: Vec<BasisMatroid> = ms.iter().flat_map(|m| delta_y_closure(m, true)).collect();
    isomorph_filter_in_memory(all)
}

/// The excluded minors of size `n` among `candidates`: those that are not
/// level-`n` members and have no minor in `known`, closed under duality and
/// Delta-Y equivalence.
pub fn sieve_excluded(
    class: &ClassSpec,
    n: usize,
    candidates: &[BasisMatroid],
    known: &[BasisMatroid],
    store: &LevelStore,
    cache: &MinorCache,
) -> Result<Vec<BasisMatroid>> {
    let members = store.read_level(&class.name, n)?;
    let index = IsoIndex::new(members.iter().map(|r| &r.matroid));
    let relevant = carrier_relevant(known, &class.carrier);
    let outside: Vec<&BasisMatroid> = candidates.par_iter().filter(|c| !index.contains(c)).collect();
    log::info!("{} n={n}: {} of {} candidates are not members", class.name, outside.len(), candidates.len());
    let survivors: Vec<BasisMatroid> = outside
        .into_par_iter()
        .filter(|c| !relevant.iter().any(|x| has_minor_iso(c, x, cache)))
        .map(|c| c.clone())
        .collect();
    log::info!("{} n={n}: {} survivors before closure", class.name, survivors.len());
    Ok(delta_dual_closure(&survivors))
}

/// Outcome of checking one base-list matroid.
#[derive(Clone, Debug)]
pub struct BaseCheck {
    pub name: String,
    /// True iff the matroid has no confined representation.
    pub outside: bool,
    /// Single-element minors that failed to have one; empty when all pass.
    pub failing_minors: Vec<String>,
}

impl BaseCheck {
    pub fn passed(&self) -> bool {
        self.outside && self.failing_minors.is_empty()
    }
}

pub fn is_member(class: &ClassSpec, m: &BasisMatroid) -> bool {
    find_confined_rep(m, &class.proxy.field, Some(class.proxy.allowed_table())).is_some()
}

/// Checks each base-list matroid against the definition of an excluded
/// minor, using the confined-representation search as membership test.
pub fn verify_base_excluded(class: &ClassSpec) -> Result<Vec<BaseCheck>> {
    let base = class.base_excluded_matroids()?;
    Ok(base
        .par_iter()
        .map(|(name, m)| {
            let outside = !is_member(class, m);
            let mut failing = Vec::new();
            for e in 0..m.n() {
                if !is_member(class, &m.delete(e)) {
                    failing.push(format!("{name}\\{e}"));
                }
                if !is_member(class, &m.contract(e)) {
                    failing.push(format!("{name}/{e}"));
                }
            }
            BaseCheck { name: name.clone(), outside, failing_minors: failing }
        })
        .collect())
}

/// The first circuit-hyperplane of `m` whose complement is independent.
fn ch_with_independent_complement(m: &BasisMatroid) -> Option<u32> {
    m.circuit_hyperplanes().into_iter().find(|&h| m.is_independent(m.ground() & !h))
}

fn has_disjoint_chs(m: &BasisMatroid) -> bool {
    let ch = m.circuit_hyperplanes();
    ch.iter().enumerate().any(|(i, &a)| ch[i + 1..].iter().any(|&b| a & b == 0))
}

#[derive(Clone, Debug, Default)]
pub struct ChHuntReport {
    pub selected: usize,
    pub with_qualifying: usize,
    pub candidates: usize,
    pub members: usize,
    pub with_known_minor: usize,
    pub survivors: Vec<BasisMatroid>,
}

/// Hunts for excluded minors of size `n + 1` among carrier extensions, with
/// two disjoint circuit-hyperplanes, of level-`n` members that have a
/// circuit-hyperplane with independent complement.
pub fn ch_hunt(
    class: &ClassSpec,
    n: usize,
    known: &[BasisMatroid],
    store: &LevelStore,
    cache: &MinorCache,
) -> Result<ChHuntReport> {
    let members = store.read_level(&class.name, n)?;
    let selected: Vec<_> = members.iter().filter(|r| ch_with_independent_complement(&r.matroid).is_some()).collect();
    let per: Vec<Vec<BasisMatroid>> = selected
        .par_iter()
        .map(|r| {
            let ctx = ExtensionContext::new(&r.carrier, None);
            all_carrier_extensions(&r.carrier)
                .iter()
                .map(|w| ctx.extension_matroid(w))
                .filter(|m| has_disjoint_chs(m) && m.is_3connected())
                .collect()
        })
        .collect();
    let with_qualifying = per.iter().filter(|v| !v.is_empty()).count();
    let cands = isomorph_filter_in_memory(per.into_iter().flatten().collect());
    let relevant = carrier_relevant(known, &class.carrier);
    let verdicts: Vec<u8> = cands
        .par_iter()
        .map(|m| {
            if relevant.iter().any(|x| has_minor_iso(m, x, cache)) {
                1
            } else if is_member(class, m) {
                2
            } else {
                0
            }
        })
        .collect();
    let survivors: Vec<BasisMatroid> =
        cands.iter().zip(&verdicts).filter(|(_, &v)| v == 0).map(|(m, _)| m.clone()).collect();
    Ok(ChHuntReport {
        selected: selected.len(),
        with_qualifying,
        candidates: cands.len(),
        members: verdicts.iter().filter(|&&v| v == 2).count(),
        with_known_minor: verdicts.iter().filter(|&&v| v == 1).count(),
        survivors: delta_dual_closure(&survivors),
    })
}

/// Per-level rank counts for every complete level.
pub fn counts_report(class: &str, store: &LevelStore) -> Result<BTreeMap<usize, BTreeMap<usize, usize>>> {
    store.complete_levels().into_iter().map(|n| Ok((n, store.read_counts(class, n)?))).collect()
}

/// Counts as a TSV table: one row per rank, one column per level, then totals.
pub fn counts_tsv(counts: &BTreeMap<usize, BTreeMap<usize, usize>>) -> String {
    let ns: Vec<usize> = counts.keys().copied().collect();
    let ranks: std::collections::BTreeSet<usize> = counts.values().flat_map(|m| m.keys().copied()).collect();
    let mut out = String::from("r\\n");
    for n in &ns {
        out.push_str(&format!("\t{n}"));
    }
    out.push('\n');
    for r in &ranks {
        out.push_str(&r.to_string());
        for n in &ns {
            match counts[n].get(r) {
                Some(c) => out.push_str(&format!("\t{c}")),
                None => out.push('\t'),
            }
        }
        out.push('\n');
    }
    out.push_str("total");
    for n in &ns {
        out.push_str(&format!("\t{}", counts[n].values().sum::<usize>()));
    }
    out.push('\n');
    out
}

/// A catalog name for `m` (allowing duals), if it has one.
pub fn catalog_name(m: &BasisMatroid) -> Option<String> {
    let p = m.profile();
    for &name in catalog::NAMES {
        for full in [name.to_string(), format!("{name}*")] {
            if let Ok(x) = catalog::get(&full) {
                if x.n() == m.n() && x.rank() == m.rank() {
                    let q = x.profile();
                    if q.key == p.key && crate::matroid::isomorphism_with(&x, &q, m, &p).is_some() {
                        return Some(full);
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct ExcludedReport {
    pub base: Vec<BaseCheck>,
    /// Excluded minors found by the sieve, by size.
    pub sieved: BTreeMap<usize, Vec<BasisMatroid>>,
}

impl ExcludedReport {
    pub fn base_ok(&self) -> bool {
        self.base.iter().all(|b| b.passed())
    }
}

/// The size at and above which splices replace plain extensions.
pub fn splice_threshold(class: &ClassSpec) -> usize {
    let largest_seed = class.seeds.iter().map(|s| s.record.n()).max().unwrap_or(0);
    13.max(largest_seed + 6)
}

/// Generates every level up to `max_n` and sieves each size from the carrier
/// threshold on. Completed levels and sieve results already in the store are
/// reused.
pub fn excluded_minors(
    class: &ClassSpec,
    max_n: usize,
    store: &LevelStore,
    cfg: &EngineConfig,
) -> Result<ExcludedReport> {
    let base = verify_base_excluded(class)?;
    let mut known: Vec<BasisMatroid> = class.base_excluded_matroids()?.into_iter().map(|(_, m)| m).collect();
    let n0 = class.n0();
    let mut sieved = BTreeMap::new();
    let cache = MinorCache::new();
    for n in n0..=max_n {
        if !store.is_complete(n) {
            generate_level(class, n, store, cfg)?;
        }
        if n < class.carrier_threshold.max(n0 + 1) {
            continue;
        }
        let found = match store.read_excluded(n)? {
            Some(found) => found,
            None => {
                let cands = if n >= splice_threshold(class) {
                    splice_candidates(class, n, store, cfg)?
                } else {
                    extension_candidates(class, n, store, cfg)?
                };
                let found = sieve_excluded(class, n, &cands, &known, store, &cache)?;
                store.write_excluded(n, &found)?;
                found
            }
        };
        log::info!("{} n={n}: {} excluded minors", class.name, found.len());
        known.extend(found.iter().cloned());
        sieved.insert(n, found);
    }
    Ok(ExcludedReport { base, sieved })
}
