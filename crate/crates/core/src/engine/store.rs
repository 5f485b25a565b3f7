//! On-disk layout: `<root>/<class>/n=<k>/{members.txt,counts.tsv,DONE}` and
//! `<root>/<class>/excluded/n=<k>.txt`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use super::record::MemberRecord;
use crate::error::{Error, Result};
use crate::matroid::{stable_hash, BasisMatroid};

#[derive(Clone, Debug)]
pub struct LevelStore {
    root: PathBuf,
}

fn checksum(text: &[u8]) -> u64 {
    let mut h = crate::matroid::StableHasher::default();
    h.write_bytes(text);
    h.finish()
}

/// Writes `contents` to `path` through a temporary file and a rename.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(Error::io(&tmp))?;
    fs::rename(&tmp, path).map_err(Error::io(path))
}

impl LevelStore {
    /// The store of one class under `store_root`.
    pub fn open(store_root: &Path, class: &str) -> Result<LevelStore> {
        let root = store_root.join(class);
        fs::create_dir_all(&root).map_err(Error::io(&root))?;
        Ok(LevelStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn level_dir(&self, n: usize) -> PathBuf {
        self.root.join(format!("n={n}"))
    }

    /// Fresh scratch space for spill files, unique within the process.
    pub fn work_dir(&self, tag: &str) -> Result<PathBuf> {
        static NEXT: AtomicUsize = AtomicUsize::new(0);
        let k = NEXT.fetch_add(1, Ordering::Relaxed);
        let dir = self.root.join("work").join(format!("{tag}-{}-{k}", std::process::id()));
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(Error::io(&dir))?;
        }
        fs::create_dir_all(&dir).map_err(Error::io(&dir))?;
        Ok(dir)
    }

    pub fn is_complete(&self, n: usize) -> bool {
        self.level_dir(n).join("DONE").exists()
    }

    /// Levels with a completion marker, ascending.
    pub fn complete_levels(&self) -> Vec<usize> {
        let mut out: Vec<usize> = fs::read_dir(&self.root)
            .into_iter()
            .flatten()
            .flatten()
            .filter_map(|e| e.file_name().to_str()?.strip_prefix("n=")?.parse().ok())
            .filter(|&n| self.is_complete(n))
            .collect();
        out.sort_unstable();
        out
    }

    /// Writes a level and marks it complete. Records must already be in
    /// canonical order.
    pub fn write_level(&self, n: usize, records: &[MemberRecord]) -> Result<()> {
        let dir = self.level_dir(n);
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(Error::io(&dir))?;
        }
        fs::create_dir_all(&dir).map_err(Error::io(&dir))?;
        let mut text = String::new();
        for r in records {
            text.push_str(&r.serialize());
            text.push('\n');
        }
        write_atomic(&dir.join("members.txt"), text.as_bytes())?;
        let mut by_rank: BTreeMap<usize, usize> = BTreeMap::new();
        for r in records {
            *by_rank.entry(r.rank()).or_default() += 1;
        }
        let mut counts = String::from("rank\tcount\n");
        for (r, c) in &by_rank {
            counts.push_str(&format!("{r}\t{c}\n"));
        }
        counts.push_str(&format!("total\t{}\n", records.len()));
        write_atomic(&dir.join("counts.tsv"), counts.as_bytes())?;
        let marker = format!("count={}\nchecksum={:016x}\n", records.len(), checksum(text.as_bytes()));
        write_atomic(&dir.join("DONE"), marker.as_bytes())
    }

    fn marker(&self, class: &str, n: usize) -> Result<(usize, u64)> {
        let path = self.level_dir(n).join("DONE");
        let text = fs::read_to_string(&path).map_err(|_| Error::MissingLevel { class: class.into(), level: n })?;
        let bad = || Error::Corrupt { path: path.clone(), reason: "malformed completion marker".into() };
        let mut count = None;
        let mut sum = None;
        for line in text.lines() {
            match line.split_once('=') {
                Some(("count", v)) => count = v.parse().ok(),
                Some(("checksum", v)) => sum = u64::from_str_radix(v, 16).ok(),
                _ => return Err(bad()),
            }
        }
        Ok((count.ok_or_else(bad)?, sum.ok_or_else(bad)?))
    }

    /// Reads a complete level, verifying its checksum and count.
    pub fn read_level(&self, class: &str, n: usize) -> Result<Vec<MemberRecord>> {
        let (count, sum) = self.marker(class, n)?;
        let path = self.level_dir(n).join("members.txt");
        let text = fs::read(&path).map_err(Error::io(&path))?;
        if checksum(&text) != sum {
            return Err(Error::Corrupt { path, reason: "checksum mismatch".into() });
        }
        let text = String::from_utf8(text).map_err(|_| Error::Corrupt { path: path.clone(), reason: "not UTF-8".into() })?;
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() % 3 != 0 || lines.len() / 3 != count {
            return Err(Error::Corrupt { path, reason: format!("expected {count} records") });
        }
        lines.chunks(3).map(|c| MemberRecord::parse(c[0], c[1], c[2])).collect()
    }

    /// Per-rank counts of a complete level, from its counts file.
    pub fn read_counts(&self, class: &str, n: usize) -> Result<BTreeMap<usize, usize>> {
        self.marker(class, n)?;
        let path = self.level_dir(n).join("counts.tsv");
        let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
        let mut out = BTreeMap::new();
        for line in text.lines().skip(1) {
            let (k, v) = line.split_once('\t').ok_or_else(|| Error::Corrupt {
                path: path.clone(),
                reason: format!("bad line {line:?}"),
            })?;
            if k == "total" {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Corrupt { path: path.clone(), reason: format!("bad line {line:?}") })
            };
            out.insert(parse(k)?, parse(v)?);
        }
        Ok(out)
    }

    fn excluded_path(&self, n: usize) -> PathBuf {
        self.root.join("excluded").join(format!("n={n}.txt"))
    }

    pub fn has_excluded(&self, n: usize) -> bool {
        self.excluded_path(n).exists()
    }

    /// Stores the excluded minors of size `n`, one `B …` line each, with a
    /// checksum trailer.
    pub fn write_excluded(&self, n: usize, ms: &[BasisMatroid]) -> Result<()> {
        let path = self.excluded_path(n);
        let dir = path.parent().expect("excluded dir");
        fs::create_dir_all(dir).map_err(Error::io(dir))?;
        let mut text = String::new();
        for m in ms {
            text.push_str(&m.serialize());
            text.push('\n');
        }
        let sum = checksum(text.as_bytes());
        text.push_str(&format!("# checksum={sum:016x}\n"));
        write_atomic(&path, text.as_bytes())
    }

    pub fn read_excluded(&self, n: usize) -> Result<Option<Vec<BasisMatroid>>> {
        let path = self.excluded_path(n);
        if !path.exists() {
            return Ok(None);
        }
        let file = fs::File::open(&path).map_err(Error::io(&path))?;
        let mut body = String::new();
        let mut trailer = None;
        for line in BufReader::new(file).lines() {
            let line = line.map_err(Error::io(&path))?;
            if let Some(v) = line.strip_prefix("# checksum=") {
                trailer = u64::from_str_radix(v, 16).ok();
            } else {
                body.push_str(&line);
                body.push('\n');
            }
        }
        if trailer != Some(checksum(body.as_bytes())) {
            return Err(Error::Corrupt { path, reason: "checksum mismatch".into() });
        }
        body.lines().map(BasisMatroid::parse).collect::<Result<Vec<_>>>().map(Some)
    }

    /// A fresh log file under `<store>/log/`.
    pub fn log_file(store_root: &Path, tag: &str) -> Result<(PathBuf, BufWriter<fs::File>)> {
        let dir = store_root.join("log");
        fs::create_dir_all(&dir).map_err(Error::io(&dir))?;
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        let mut k = 0;
        loop {
            let path = dir.join(format!("{stamp}-{}-{tag}-{k}.log", std::process::id()));
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(f) => return Ok((path, BufWriter::new(f))),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => k += 1,
                Err(e) => return Err(Error::Io { path, source: e }),
            }
        }
    }
}

/// A short content hash of a set of matroids, for report lines.
pub fn fingerprint(ms: &[BasisMatroid]) -> u64 {
    let hs: Vec<u64> = ms.iter().map(|m| checksum(m.serialize().as_bytes())).collect();
    stable_hash(&hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ClassSpec;

    #[test]
    fn level_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let store = LevelStore::open(dir.path(), "dyadic").unwrap();
        let class = ClassSpec::builtin("dyadic").unwrap();
        let recs: Vec<MemberRecord> = class.seeds.iter().map(|s| s.record.clone()).collect();
        assert!(store.read_level("dyadic", 7).is_err());
        store.write_level(7, &recs).unwrap();
        assert!(store.is_complete(7));
        assert_eq!(store.read_level("dyadic", 7).unwrap(), recs);
        assert_eq!(store.complete_levels(), vec![7]);
        let counts = store.read_counts("dyadic", 7).unwrap();
        assert_eq!(counts.values().sum::<usize>(), recs.len());
        let path = store.level_dir(7).join("members.txt");
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("B 1 1 01\n");
        fs::write(&path, text).unwrap();
        assert!(matches!(store.read_level("dyadic", 7), Err(Error::Corrupt { .. })));

        let ms = vec![crate::matroid::BasisMatroid::uniform(2, 5)];
        store.write_excluded(5, &ms).unwrap();
        assert_eq!(store.read_excluded(5).unwrap().unwrap(), ms);
        assert!(store.read_excluded(6).unwrap().is_none());
    }
}
