use std::fmt;

use super::colex::{tables, MAX_N};
use crate::error::{Error, Result};

/// A matroid on `{0, .., n-1}` (n ≤ 16) stored as a bitmap over the
/// colex-ordered r-subsets: bit j is set iff the j-th r-subset is a basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisMatroid {
    n: u8,
    r: u8,
    bits: Vec<u64>,
}

impl fmt::Debug for BasisMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasisMatroid(n={}, r={}, bases={})", self.n, self.r, self.basis_count())
    }
}

/// Positions of the bits of `keep`, used to compact masks after deletions.
pub(crate) struct Compactor {
    pos: [u8; MAX_N],
    keep: u32,
}

impl Compactor {
    pub(crate) fn new(keep: u32) -> Compactor {
        let mut pos = [0u8; MAX_N];
        let mut k = 0;
        for (i, p) in pos.iter_mut().enumerate() {
            if keep >> i & 1 == 1 {
                *p = k;
                k += 1;
            }
        }
        Compactor { pos, keep }
    }

    #[inline]
    pub(crate) fn apply(&self, mask: u32) -> u32 {
        let mut m = mask & self.keep;
        let mut out = 0;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            out |= 1 << self.pos[b];
            m &= m - 1;
        }
        out
    }
}

pub(crate) fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &e| m | 1 << e)
}

pub fn elements_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

impl BasisMatroid {
    fn empty(n: usize, r: usize) -> Result<BasisMatroid> {
        if n > MAX_N {
            return Err(Error::InvalidMatroid(format!("ground set of {n} elements exceeds {MAX_N}")));
        }
        if r > n {
            return Err(Error::InvalidMatroid(format!("rank {r} exceeds ground set size {n}")));
        }
        let len = tables().binom(n, r);
        Ok(BasisMatroid { n: n as u8, r: r as u8, bits: vec![0; len.div_ceil(64)] })
    }

    /// Builds the matroid whose bases are the given masks. The exchange axiom
    /// is not checked; see [`BasisMatroid::validate_exchange`].
    pub fn from_masks(n: usize, r: usize, masks: impl IntoIterator<Item = u32>) -> Result<BasisMatroid> {
        let mut m = Self::empty(n, r)?;
        let t = tables();
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut any = false;
        for b in masks {
            if b & !full != 0 || b.count_ones() as usize != r {
                return Err(Error::InvalidMatroid(format!("basis {:?} is not an {r}-subset of 0..{n}", elements_of(b))));
            }
            m.set(t.index(b));
            any = true;
        }
        if !any {
            return Err(Error::InvalidMatroid("a matroid needs at least one basis".into()));
        }
        Ok(m)
    }

    pub fn from_bases(n: usize, r: usize, bases: &[Vec<usize>]) -> Result<BasisMatroid> {
        for b in bases {
            if b.len() != r || b.iter().any(|&e| e >= n) {
                return Err(Error::InvalidMatroid(format!("basis {b:?} is not an {r}-subset of 0..{n}")));
            }
            let mut s = b.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != r {
                return Err(Error::InvalidMatroid(format!("basis {b:?} repeats an element")));
            }
        }
        Self::from_masks(n, r, bases.iter().map(|b| mask_of(b)))
    }

    /// Bases are the r-subsets accepted by `pred`.
    pub fn from_predicate(n: usize, r: usize, mut pred: impl FnMut(u32) -> bool) -> Result<BasisMatroid> {
        let mut m = Self::empty(n, r)?;
        let t = tables();
        for (j, &s) in t.subsets(n, r).iter().enumerate() {
            if pred(s as u32) {
                m.set(j);
            }
        }
        if m.basis_count() == 0 {
            return Err(Error::InvalidMatroid("a matroid needs at least one basis".into()));
        }
        Ok(m)
    }

    pub fn uniform(r: usize, n: usize) -> BasisMatroid {
        Self::from_predicate(n, r, |_| true).expect("uniform matroid")
    }

    #[inline]
    fn set(&mut self, j: usize) {
        self.bits[j >> 6] |= 1 << (j & 63);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.r as usize
    }

    #[inline]
    pub fn corank(&self) -> usize {
        (self.n - self.r) as usize
    }

    #[inline]
    pub fn ground(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn basis_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn bitmap(&self) -> &[u64] {
        &self.bits
    }

    /// True iff `mask` is a basis.
    #[inline]
    pub fn is_basis(&self, mask: u32) -> bool {
        if mask.count_ones() != self.r as u32 || mask & !self.ground() != 0 {
            return false;
        }
        let j = tables().index(mask);
        self.bits[j >> 6] >> (j & 63) & 1 == 1
    }

    /// Bases as masks, in colex order.
    pub fn bases(&self) -> impl Iterator<Item = u32> + '_ {
        let t = tables();
        let r = self.r as usize;
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(t.mask(r, w * 64 + b))
            })
        })
    }

    /// Rank of a subset, as the largest intersection with a basis.
    pub fn rank_of(&self, x: u32) -> usize {
        let cap = (x & self.ground()).count_ones().min(self.r as u32);
        let mut best = 0;
        for b in self.bases() {
            let k = (b & x).count_ones();
            if k > best {
                best = k;
                if best == cap {
                    break;
                }
            }
        }
        best as usize
    }

    pub fn is_independent(&self, x: u32) -> bool {
        self.rank_of(x) == x.count_ones() as usize
    }

    pub fn dual(&self) -> BasisMatroid {
        let full = self.ground();
        let mut d = Self::empty(self.n(), self.corank()).unwrap();
        let t = tables();
        for b in self.bases() {
            d.set(t.index(full ^ b));
        }
        d
    }

    /// `M \ delete / contract`, relabelled by order-preserving compaction.
    pub fn minor(&self, delete: u32, contract: u32) -> Result<BasisMatroid> {
        if delete & contract != 0 {
            return Err(Error::Precondition("deletion and contraction sets intersect".into()));
        }
        if (delete | contract) & !self.ground() != 0 {
            return Err(Error::Precondition("minor sets leave the ground set".into()));
        }
        Ok(self.minor_unchecked(delete, contract))
    }

    pub(crate) fn minor_unchecked(&self, delete: u32, contract: u32) -> BasisMatroid {
        let keep = self.ground() & !delete & !contract;
        let rc = self.rank_of(contract);
        let rd = self.rank_of(self.ground() & !delete);
        let new_r = rd - rc;
        let new_n = keep.count_ones() as usize;
        let comp = Compactor::new(keep);
        let mut m = Self::empty(new_n, new_r).unwrap();
        let t = tables();
        for b in self.bases() {
            if (b & contract).count_ones() as usize == rc && (b & keep).count_ones() as usize == new_r {
                m.set(t.index(comp.apply(b)));
            }
        }
        m
    }

    pub fn delete(&self, e: usize) -> BasisMatroid {
        let bit = 1u32 << e;
        let comp = Compactor::new(self.ground() & !bit);
        let t = tables();
        let coloop = self.bases().all(|b| b & bit != 0);
        let new_r = self.rank() - coloop as usize;
        let mut m = Self::empty(self.n() - 1, new_r).unwrap();
        for b in self.bases() {
            if coloop || b & bit == 0 {
                m.set(t.index(comp.apply(b)));
            }
        }
        m
    }

    pub fn contract(&self, e: usize) -> BasisMatroid {
        let bit = 1u32 << e;
        let comp = Compactor::new(self.ground() & !bit);
        let t = tables();
        let is_loop = self.bases().all(|b| b & bit == 0);
        let new_r = self.rank() - (!is_loop) as usize;
        let mut m = Self::empty(self.n() - 1, new_r).unwrap();
        for b in self.bases() {
            if is_loop || b & bit != 0 {
                m.set(t.index(comp.apply(b)));
            }
        }
        m
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> BasisMatroid {
        assert_eq!(perm.len(), self.n());
        let t = tables();
        let mut m = Self::empty(self.n(), self.rank()).unwrap();
        for b in self.bases() {
            let mut x = 0u32;
            let mut y = b;
            while y != 0 {
                let i = y.trailing_zeros() as usize;
                x |= 1 << perm[i];
                y &= y - 1;
            }
            m.set(t.index(x));
        }
        m
    }

    /// Adds one basis; used by relaxation.
    pub(crate) fn with_basis(&self, mask: u32) -> BasisMatroid {
        let mut m = self.clone();
        m.set(tables().index(mask));
        m
    }

    /// Checks the basis exchange axiom.
    pub fn validate_exchange(&self) -> bool {
        let bases: Vec<u32> = self.bases().collect();
        if bases.is_empty() {
            return false;
        }
        for &b1 in &bases {
            for &b2 in &bases {
                let mut xs = b1 & !b2;
                while xs != 0 {
                    let x = xs & xs.wrapping_neg();
                    xs &= xs - 1;
                    let mut ys = b2 & !b1;
                    let mut ok = false;
                    while ys != 0 {
                        let y = ys & ys.wrapping_neg();
                        ys &= ys - 1;
                        if self.is_basis((b1 & !x) | y) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `B <n> <r> <HEX>`; bit j sits at byte j>>3, bit j&7.
    pub fn serialize(&self) -> String {
        let len = tables().binom(self.n(), self.rank());
        let nbytes = len.div_ceil(8).max(1);
        let mut s = format!("B {} {} ", self.n, self.r);
        for i in 0..nbytes {
            let byte = (self.bits[i / 8] >> (8 * (i % 8))) & 0xFF;
            s.push_str(&format!("{byte:02X}"));
        }
        s
    }

    pub fn parse(line: &str) -> Result<BasisMatroid> {
        let bad = |why: &str| Error::Parse(format!("matroid line {line:?}: {why}"));
        let mut it = line.split_whitespace();
        if it.next() != Some("B") {
            return Err(bad("expected B"));
        }
        let n: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad n"))?;
        let r: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad r"))?;
        let hex = it.next().ok_or_else(|| bad("missing bitmap"))?;
        if it.next().is_some() {
            return Err(bad("trailing fields"));
        }
        let mut m = Self::empty(n, r)?;
        let len = tables().binom(n, r);
        if hex.len() != 2 * len.div_ceil(8).max(1) {
            return Err(bad("bitmap length"));
        }
        for i in 0..hex.len() / 2 {
            let byte = u64::from_str_radix(&hex[2 * i..2 * i + 2], 16).map_err(|_| bad("bad hex"))?;
            if i / 8 < m.bits.len() {
                m.bits[i / 8] |= byte << (8 * (i % 8));
            } else if byte != 0 {
                return Err(bad("bits beyond range"));
            }
        }
        if len % 64 != 0 {
            if let Some(last) = m.bits.last() {
                if last >> (len % 64) != 0 {
                    return Err(bad("bits beyond range"));
                }
            }
        }
        if m.basis_count() == 0 {
            return Err(bad("no bases"));
        }
        Ok(m)
    }

    /// Appends an element placed by the caller-supplied basis test on masks
    /// containing it; masks without the new element keep their status.
    pub(crate) fn extend_with(&self, mut is_basis_with_new: impl FnMut(u32) -> bool) -> BasisMatroid {
        let n = self.n();
        let r = self.rank();
        let mut m = Self::empty(n + 1, r).unwrap();
        // The old bitmap is a prefix of the new one.
        m.bits[..self.bits.len()].copy_from_slice(&self.bits);
        let t = tables();
        let new_bit = 1u32 << n;
        for (j, &s) in t.subsets(n + 1, r).iter().enumerate().skip(t.binom(n, r)) {
            debug_assert!(s as u32 & new_bit != 0);
            if is_basis_with_new(s as u32) {
                m.set(j);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_dual() {
        let u25 = BasisMatroid::uniform(2, 5);
        assert_eq!(u25.basis_count(), 10);
        assert_eq!(u25.dual(), BasisMatroid::uniform(3, 5));
        assert_eq!(u25.dual().dual(), u25);
        assert_eq!(u25.rank_of(0b111), 2);
        assert_eq!(u25.rank_of(0), 0);
    }

    #[test]
    fn errors() {
        assert!(BasisMatroid::from_bases(4, 2, &[]).is_err());
        assert!(BasisMatroid::from_bases(4, 2, &[vec![0, 1, 2]]).is_err());
        assert!(BasisMatroid::from_bases(17, 2, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn exchange() {
        assert!(BasisMatroid::uniform(2, 4).validate_exchange());
        let bad = BasisMatroid::from_bases(4, 2, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!bad.validate_exchange());
    }

    #[test]
    fn minors() {
        let u36 = BasisMatroid::uniform(3, 6);
        assert_eq!(u36.minor(0, 1 << 5).unwrap(), BasisMatroid::uniform(2, 5));
        assert_eq!(u36.contract(5), BasisMatroid::uniform(2, 5));
        assert_eq!(u36.delete(0), BasisMatroid::uniform(3, 5));
        assert_eq!(u36.minor(0, 0).unwrap(), u36);
        assert!(u36.minor(1, 1).is_err());
        // contracting a loop / deleting a coloop
        let m = BasisMatroid::from_bases(3, 1, &[vec![0], vec![1]]).unwrap();
        assert_eq!(m.contract(2), BasisMatroid::uniform(1, 2));
        assert_eq!(m.minor(0, 1 << 2).unwrap(), BasisMatroid::uniform(1, 2));
        let c = m.dual();
        assert_eq!(c.delete(2), BasisMatroid::uniform(1, 2));
        assert_eq!(c.minor(1 << 2, 0).unwrap(), BasisMatroid::uniform(1, 2));
    }

    #[test]
    fn serialization_round_trip() {
        let m = BasisMatroid::from_bases(4, 2, &[vec![0, 1], vec![0, 2], vec![1, 3]]).unwrap();
        let s = m.serialize();
        assert_eq!(s, "B 4 2 13");
        assert_eq!(BasisMatroid::parse(&s).unwrap(), m);
        assert!(BasisMatroid::parse("B 4 2 4B").is_err());
        assert!(BasisMatroid::parse("B 4 2 00").is_err());
        assert!(BasisMatroid::parse("X 4 2 13").is_err());
    }

    #[test]
    fn extension_prefix() {
        let u24 = BasisMatroid::uniform(2, 4);
        let u25 = u24.extend_with(|_| true);
        assert_eq!(u25, BasisMatroid::uniform(2, 5));
    }
}
