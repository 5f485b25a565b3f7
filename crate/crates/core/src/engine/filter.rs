//! Batched two-pass isomorph filtering.
//!
//! Pass one spills each batch into `g` group files by invariant hash mod `g`.
//! Pass two loads one group at a time, sorts by (invariant, serialization)
//! and keeps the first record of each isomorphism class within runs of equal
//! invariant. The survivor of a class is therefore its smallest
//! serialization, whatever the batch size, `g` or input order.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use super::record::MemberRecord;
use crate::error::{Error, Result};
use crate::matroid::{isomorphism_with, BasisMatroid, InvariantKey};

/// Something the filter can spill to disk as one line.
pub trait Spillable: Sized + Send + Sync {
    fn matroid(&self) -> &BasisMatroid;
    fn invariant(&self) -> InvariantKey;
    fn to_line(&self) -> String;
    fn from_line(line: &str) -> Result<Self>;
}

impl Spillable for MemberRecord {
    fn matroid(&self) -> &BasisMatroid {
        &self.matroid
    }
    fn invariant(&self) -> InvariantKey {
        self.invariant
    }
    fn to_line(&self) -> String {
        self.serialize().replace('\n', "\t")
    }
    fn from_line(line: &str) -> Result<Self> {
        let parts: Vec<&str> = line.split('\t').collect();
        match parts[..] {
            [b, c, d] => MemberRecord::parse(b, c, d),
            _ => Err(Error::Parse(format!("spilled record {line:?}"))),
        }
    }
}

impl Spillable for BasisMatroid {
    fn matroid(&self) -> &BasisMatroid {
        self
    }
    fn invariant(&self) -> InvariantKey {
        self.invariant_key()
    }
    fn to_line(&self) -> String {
        self.serialize()
    }
    fn from_line(line: &str) -> Result<Self> {
        BasisMatroid::parse(line)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FilterConfig {
    pub groups: usize,
    pub batch_size: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { groups: 127, batch_size: 100_000 }
    }
}

fn key_prefix(k: &InvariantKey) -> String {
    format!("{:016x} {:02} {:02} {:010}", k.hash, k.n, k.r, k.basis_count)
}

pub struct IsomorphFilter<T: Spillable> {
    dir: PathBuf,
    cfg: FilterConfig,
    batch: Vec<T>,
    writers: Vec<Option<BufWriter<File>>>,
    pushed: usize,
}

impl<T: Spillable> IsomorphFilter<T> {
    /// `dir` must be an empty scratch directory.
    pub fn new(dir: PathBuf, cfg: FilterConfig) -> Result<IsomorphFilter<T>> {
        if cfg.groups == 0 || cfg.batch_size == 0 {
            return Err(Error::Precondition("groups and batch size must be positive".into()));
        }
        fs::create_dir_all(&dir).map_err(Error::io(&dir))?;
        let writers = (0..cfg.groups).map(|_| None).collect();
        Ok(IsomorphFilter { dir, cfg, batch: Vec::new(), writers, pushed: 0 })
    }

    fn group_path(&self, g: usize) -> PathBuf {
        self.dir.join(format!("group-{g:04}.txt"))
    }

    pub fn push(&mut self, item: T) -> Result<()> {
        self.batch.push(item);
        self.pushed += 1;
        if self.batch.len() >= self.cfg.batch_size {
            self.spill()?;
        }
        Ok(())
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = T>) -> Result<()> {
        for x in items {
            self.push(x)?;
        }
        Ok(())
    }

    /// Number of items pushed so far.
    pub fn pushed(&self) -> usize {
        self.pushed
    }

    fn spill(&mut self) -> Result<()> {
        let g = self.cfg.groups;
        let lines: Vec<(usize, String)> = self
            .batch
            .par_iter()
            .map(|x| {
                let k = x.invariant();
                ((k.hash % g as u64) as usize, format!("{}\t{}\n", key_prefix(&k), x.to_line()))
            })
            .collect();
        self.batch.clear();
        for (grp, line) in lines {
            if self.writers[grp].is_none() {
                let path = self.group_path(grp);
                let f = File::create(&path).map_err(|source| Error::GroupIo { group: grp, source })?;
                self.writers[grp] = Some(BufWriter::new(f));
            }
            let w = self.writers[grp].as_mut().expect("opened above");
            w.write_all(line.as_bytes()).map_err(|source| Error::GroupIo { group: grp, source })?;
        }
        Ok(())
    }

    /// Runs pass two and returns the survivors in canonical order.
    pub fn finish(mut self) -> Result<Vec<T>> {
        self.spill()?;
        let mut present = Vec::new();
        for (grp, w) in self.writers.iter_mut().enumerate() {
            if let Some(w) = w.as_mut() {
                w.flush().map_err(|source| Error::GroupIo { group: grp, source })?;
                present.push(grp);
            }
        }
        self.writers.clear();
        let per_group: Vec<Vec<(String, T)>> =
            present.par_iter().map(|&grp| self.filter_group(grp)).collect::<Result<_>>()?;
        let mut out: Vec<(String, T)> = per_group.into_iter().flatten().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        for grp in present {
            let _ = fs::remove_file(self.group_path(grp));
        }
        let _ = fs::remove_dir(&self.dir);
        Ok(out.into_iter().map(|(_, x)| x).collect())
    }

    fn filter_group(&self, grp: usize) -> Result<Vec<(String, T)>> {
        let gio = |source| Error::GroupIo { group: grp, source };
        let f = File::open(self.group_path(grp)).map_err(gio)?;
        let mut lines: Vec<String> = BufReader::new(f).lines().collect::<std::io::Result<_>>().map_err(gio)?;
        lines.sort_unstable();
        lines.dedup();
        let mut out = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let key = lines[i].split('\t').next().unwrap_or("").to_string();
            let mut j = i;
            while j < lines.len() && lines[j].split('\t').next() == Some(key.as_str()) {
                j += 1;
            }
            let items: Vec<T> = lines[i..j]
                .iter()
                .map(|l| T::from_line(l.split_once('\t').map(|x| x.1).unwrap_or("")))
                .collect::<Result<_>>()?;
            if items.len() == 1 {
                let line = items[0].to_line();
                out.push((line, items.into_iter().next().unwrap()));
            } else {
                let mut kept: Vec<(T, crate::matroid::Profile)> = Vec::new();
                for x in items {
                    let p = x.matroid().profile();
                    if !kept.iter().any(|(y, q)| isomorphism_with(y.matroid(), q, x.matroid(), &p).is_some()) {
                        kept.push((x, p));
                    }
                }
                out.extend(kept.into_iter().map(|(x, _)| (x.to_line(), x)));
            }
            i = j;
        }
        Ok(out)
    }
}

/// Filters a whole collection through a scratch directory.
pub fn isomorph_filter<T: Spillable>(items: Vec<T>, dir: PathBuf, cfg: FilterConfig) -> Result<Vec<T>> {
    let mut f = IsomorphFilter::new(dir, cfg)?;
    f.extend(items)?;
    f.finish()
}

/// In-memory variant for small collections, with the same survivor rule.
pub fn isomorph_filter_in_memory<T: Spillable>(items: Vec<T>) -> Vec<T> {
    let mut keyed: Vec<(String, String, T)> =
        items.into_par_iter().map(|x| (key_prefix(&x.invariant()), x.to_line(), x)).collect();
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    let mut out: Vec<(String, T)> = Vec::new();
    let mut run: Vec<(String, T, crate::matroid::Profile)> = Vec::new();
    let mut run_key = String::new();
    let flush = |run: &mut Vec<(String, T, crate::matroid::Profile)>, out: &mut Vec<(String, T)>| {
        out.extend(run.drain(..).map(|(l, x, _)| (l, x)));
    };
    for (key, line, x) in keyed {
        if key != run_key {
            flush(&mut run, &mut out);
            run_key = key;
        }
        let p = x.matroid().profile();
        if !run.iter().any(|(_, y, q)| isomorphism_with(y.matroid(), q, x.matroid(), &p).is_some()) {
            run.push((line, x, p));
        }
    }
    flush(&mut run, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, x)| x).collect()
}
