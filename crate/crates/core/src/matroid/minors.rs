//! Minor containment with a shared verdict cache.

use std::collections::HashMap;

use parking_lot::RwLock;

use super::basis::BasisMatroid;
use super::iso::{isomorphism_with, InvariantKey, Profile};

struct Entry {
    matroid: BasisMatroid,
    profile: Profile,
    target: BasisMatroid,
    verdict: bool,
}

/// Verdicts of earlier minor checks, bucketed by invariant key. A verdict is
/// only reused after an exact isomorphism match within the bucket.
#[derive(Default)]
pub struct MinorCache {
    buckets: RwLock<HashMap<(InvariantKey, InvariantKey), Vec<Entry>>>,
}

impl MinorCache {
    pub fn new() -> MinorCache {
        MinorCache::default()
    }

    pub fn len(&self) -> usize {
        self.buckets.read().values().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lookup(&self, m: &BasisMatroid, pm: &Profile, target: &BasisMatroid, tk: InvariantKey) -> Option<bool> {
        let guard = self.buckets.read();
        let bucket = guard.get(&(tk, pm.key))?;
        bucket
            .iter()
            .find(|e| &e.target == target && isomorphism_with(&e.matroid, &e.profile, m, pm).is_some())
            .map(|e| e.verdict)
    }

    fn insert(&self, m: BasisMatroid, pm: Profile, target: &BasisMatroid, tk: InvariantKey, verdict: bool) {
        let mut guard = self.buckets.write();
        let bucket = guard.entry((tk, pm.key)).or_default();
        // Another thread may have raced us to the same class.
        if bucket
            .iter()
            .any(|e| &e.target == target && isomorphism_with(&e.matroid, &e.profile, &m, &pm).is_some())
        {
            return;
        }
        bucket.push(Entry { matroid: m, profile: pm, target: target.clone(), verdict });
    }
}

fn size_feasible(m: &BasisMatroid, n: &BasisMatroid) -> bool {
    m.n() >= n.n() && m.rank() >= n.rank() && m.corank() >= n.corank()
}

/// True iff `m` has a minor isomorphic to `n`.
pub fn has_minor_iso(m: &BasisMatroid, n: &BasisMatroid, cache: &MinorCache) -> bool {
    let tp = n.profile();
    descend(m, n, &tp, cache)
}

fn descend(m: &BasisMatroid, n: &BasisMatroid, tp: &Profile, cache: &MinorCache) -> bool {
    if !size_feasible(m, n) {
        return false;
    }
    let pm = m.profile();
    if m.n() == n.n() {
        return isomorphism_with(m, &pm, n, tp).is_some();
    }
    if let Some(v) = cache.lookup(m, &pm, n, tp.key) {
        return v;
    }
    let mut verdict = false;
    for e in 0..m.n() {
        let d = m.delete(e);
        if size_feasible(&d, n) && descend(&d, n, tp, cache) {
            verdict = true;
            break;
        }
        let c = m.contract(e);
        if size_feasible(&c, n) && descend(&c, n, tp, cache) {
            verdict = true;
            break;
        }
    }
    cache.insert(m.clone(), pm, n, tp.key, verdict);
    verdict
}

/// Reference check without caching: tries every kept set and every split of
/// the removed elements into deletions and contractions.
pub fn has_minor_iso_naive(m: &BasisMatroid, n: &BasisMatroid) -> bool {
    if !size_feasible(m, n) {
        return false;
    }
    let full = m.ground();
    for keep in 0..=full {
        if keep.count_ones() as usize != n.n() {
            continue;
        }
        let rest = full & !keep;
        let mut c = rest;
        loop {
            let minor = m.minor_unchecked(rest & !c, c);
            if minor.rank() == n.rank() && minor.is_isomorphic(n) {
                return true;
            }
            if c == 0 {
                break;
            }
            c = (c - 1) & rest;
        }
    }
    false
}
