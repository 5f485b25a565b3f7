//! Level generation and candidate streams.

use std::collections::HashMap;

use rayon::prelude::*;

use super::class::ClassSpec;
use super::filter::{FilterConfig, IsomorphFilter};
use super::record::MemberRecord;
use super::store::LevelStore;
use crate::error::{Error, Result};
use crate::linrep::{all_carrier_extensions, ExtensionContext, ExtensionMode};
use crate::matroid::{isomorphism_with, BasisMatroid, InvariantKey, Profile};

/// Parents processed per parallel chunk; bounds the records held in memory
/// before they reach the filter.
const CHUNK: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    pub filter: FilterConfig,
    pub mode: ExtensionMode,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { filter: FilterConfig::default(), mode: ExtensionMode::Exact }
    }
}

/// Confined simple extensions of one member, each with its lockstep carrier
/// column, as records in standard position.
pub fn member_extensions(class: &ClassSpec, parent: &MemberRecord, mode: ExtensionMode) -> Result<Vec<MemberRecord>> {
    let pctx = ExtensionContext::new(&parent.confined, Some(class.proxy.allowed_table()));
    let cctx = ExtensionContext::new(&parent.carrier, None);
    let mut out = Vec::new();
    for z in pctx.confined_simple_extensions(mode) {
        let target = pctx.extension_matroid(&z);
        let w = cctx.matching_column(&parent.confined, &z, &target).ok_or_else(|| {
            Error::Precondition(format!("no {} column matches a confined extension", class.carrier))
        })?;
        out.push(parent.extend(&z, &w, target));
    }
    Ok(out)
}

/// Writes level `n`: extensions of level `n - 1` closed under duality, plus
/// the seeds of size `n`, isomorph-filtered. Returns the member count.
pub fn generate_level(class: &ClassSpec, n: usize, store: &LevelStore, cfg: &EngineConfig) -> Result<usize> {
    let n0 = class.n0();
    if n < n0 {
        return Err(Error::Precondition(format!("level {n} is below the smallest seed size {n0}")));
    }
    let mut filter = IsomorphFilter::new(store.work_dir(&format!("gen-{n}"))?, cfg.filter)?;
    if n > n0 {
        let parents = store.read_level(&class.name, n - 1)?;
        for chunk in parents.chunks(CHUNK) {
            let exts: Vec<Vec<MemberRecord>> =
                chunk.par_iter().map(|p| member_extensions(class, p, cfg.mode)).collect::<Result<_>>()?;
            for rec in exts.into_iter().flatten() {
                let d = rec.dual();
                filter.push(rec)?;
                filter.push(d)?;
            }
        }
    }
    for s in class.seeds.iter().filter(|s| s.record.n() == n) {
        filter.push(s.record.clone())?;
    }
    let raw = filter.pushed();
    let members = filter.finish()?;
    log::info!("{} n={n}: {raw} raw records, {} members", class.name, members.len());
    store.write_level(n, &members)?;
    Ok(members.len())
}

/// Isomorphism-class lookup over a fixed collection.
pub struct IsoIndex {
    by_key: HashMap<InvariantKey, Vec<(BasisMatroid, Profile)>>,
}

impl IsoIndex {
    pub fn new<'a>(ms: impl IntoIterator<Item = &'a BasisMatroid>) -> IsoIndex {
        let ms: Vec<&BasisMatroid> = ms.into_iter().collect();
        let profiled: Vec<(BasisMatroid, Profile)> = ms.par_iter().map(|m| ((*m).clone(), m.profile())).collect();
        let mut by_key: HashMap<InvariantKey, Vec<(BasisMatroid, Profile)>> = HashMap::new();
        for (m, p) in profiled {
            by_key.entry(p.key).or_default().push((m, p));
        }
        IsoIndex { by_key }
    }

    /// Position-free membership test.
    pub fn contains(&self, m: &BasisMatroid) -> bool {
        let p = m.profile();
        self.contains_profiled(m, &p)
    }

    pub fn contains_profiled(&self, m: &BasisMatroid, p: &Profile) -> bool {
        self.by_key
            .get(&p.key)
            .is_some_and(|v| v.iter().any(|(x, q)| isomorphism_with(x, q, m, p).is_some()))
    }

    pub fn len(&self) -> usize {
        self.by_key.values().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }
}

fn check_threshold(class: &ClassSpec, n: usize) -> Result<()> {
    if n < class.carrier_threshold {
        return Err(Error::Precondition(format!(
            "{}: carrier candidates start at n = {}, not {n}",
            class.name, class.carrier_threshold
        )));
    }
    Ok(())
}

/// All carrier-field simple single-element extensions of level `n - 1`
/// members, with their duals, isomorph-filtered.
pub fn extension_candidates(
    class: &ClassSpec,
    n: usize,
    store: &LevelStore,
    cfg: &EngineConfig,
) -> Result<Vec<BasisMatroid>> {
    check_threshold(class, n)?;
    let parents = store.read_level(&class.name, n - 1)?;
    let mut filter = IsomorphFilter::new(store.work_dir(&format!("ext-{n}"))?, cfg.filter)?;
    for chunk in parents.chunks(CHUNK) {
        let exts: Vec<Vec<BasisMatroid>> = chunk
            .par_iter()
            .map(|p| {
                let ctx = ExtensionContext::new(&p.carrier, None);
                all_carrier_extensions(&p.carrier).iter().map(|w| ctx.extension_matroid(w)).collect()
            })
            .collect();
        for m in exts.into_iter().flatten() {
            let d = m.dual();
            filter.push(m)?;
            filter.push(d)?;
        }
    }
    let raw = filter.pushed();
    let out = filter.finish()?;
    log::info!("{} n={n}: {raw} raw extension candidates, {} classes", class.name, out.len());
    Ok(out)
}

/// Splices over level `n - 2`: pairs of carrier columns whose single
/// extensions are both level `n - 1` members, joined when the result is
/// simple and cosimple; closed under duality and isomorph-filtered.
pub fn splice_candidates(
    class: &ClassSpec,
    n: usize,
    store: &LevelStore,
    cfg: &EngineConfig,
) -> Result<Vec<BasisMatroid>> {
    if n < class.n0() + 2 {
        return Err(Error::Precondition(format!("splicing needs n >= {}", class.n0() + 2)));
    }
    let grand = store.read_level(&class.name, n - 2)?;
    let parents = store.read_level(&class.name, n - 1)?;
    let index = IsoIndex::new(parents.iter().map(|p| &p.matroid));
    let mut filter = IsomorphFilter::new(store.work_dir(&format!("splice-{n}"))?, cfg.filter)?;
    for chunk in grand.chunks(CHUNK) {
        let spl: Vec<Vec<BasisMatroid>> = chunk.par_iter().map(|g| splices_of(g, &index)).collect();
        for m in spl.into_iter().flatten() {
            let d = m.dual();
            filter.push(m)?;
            filter.push(d)?;
        }
    }
    let raw = filter.pushed();
    let out = filter.finish()?;
    log::info!("{} n={n}: {raw} raw splices, {} classes", class.name, out.len());
    Ok(out)
}

/// Splices of one level `n - 2` member against the level `n - 1` index.
pub fn splices_of(g: &MemberRecord, index: &IsoIndex) -> Vec<BasisMatroid> {
    let ctx = ExtensionContext::new(&g.carrier, None);
    let cols: Vec<Vec<u32>> =
        all_carrier_extensions(&g.carrier).into_iter().filter(|w| index.contains(&ctx.extension_matroid(w))).collect();
    let mut out = Vec::new();
    for (i, ve) in cols.iter().enumerate() {
        let with_e = g.carrier.with_column(ve);
        let ectx = ExtensionContext::new(&with_e, None);
        for vf in &cols[i + 1..] {
            let m = ectx.extension_matroid(vf);
            if m.is_simple() && m.is_cosimple() {
                out.push(m);
            }
        }
    }
    out
}
