//! Rank tables and the structural predicates built on them.

use super::basis::BasisMatroid;
use crate::error::{Error, Result};

/// Ranks of all `2^n` subsets.
pub struct RankTable {
    n: usize,
    ranks: Vec<u8>,
}

impl RankTable {
    pub fn new(m: &BasisMatroid) -> RankTable {
        let n = m.n();
        let size = 1usize << n;
        let mut indep = vec![false; size];
        for b in m.bases() {
            indep[b as usize] = true;
        }
        // Supersets are numerically larger, so a descending sweep sees them first.
        for x in (0..size).rev() {
            if indep[x] {
                continue;
            }
            if x.count_ones() as usize >= m.rank() {
                continue;
            }
            let mut free = !x & (size - 1);
            while free != 0 {
                let e = free & free.wrapping_neg();
                free &= free - 1;
                if indep[x | e] {
                    indep[x] = true;
                    break;
                }
            }
        }
        let mut ranks = vec![0u8; size];
        for x in 1..size {
            ranks[x] = if indep[x] {
                x.count_ones() as u8
            } else {
                let mut best = 0;
                let mut y = x;
                while y != 0 {
                    let e = y & y.wrapping_neg();
                    y &= y - 1;
                    best = best.max(ranks[x ^ e]);
                }
                best
            };
        }
        RankTable { n, ranks }
    }

    #[inline]
    pub fn rank(&self, x: u32) -> usize {
        self.ranks[x as usize] as usize
    }

    #[inline]
    pub fn full(&self) -> u32 {
        ((1usize << self.n) - 1) as u32
    }

    /// `r(X) + r(E - X) - r(E)`.
    #[inline]
    pub fn connectivity(&self, x: u32) -> usize {
        self.rank(x) + self.rank(self.full() & !x) - self.rank(self.full())
    }

    pub fn closure(&self, x: u32) -> u32 {
        let rx = self.rank(x);
        let mut c = x;
        for e in 0..self.n {
            let b = 1u32 << e;
            if x & b == 0 && self.rank(x | b) == rx {
                c |= b;
            }
        }
        c
    }

    pub fn is_flat(&self, x: u32) -> bool {
        self.closure(x) == x
    }

    /// Flats of the given rank.
    pub fn flats_of_rank(&self, k: usize) -> Vec<u32> {
        (0..=self.full()).filter(|&x| self.rank(x) == k && self.is_flat(x)).collect()
    }

    pub fn is_circuit(&self, x: u32) -> bool {
        let k = x.count_ones() as usize;
        if k == 0 || self.rank(x) != k - 1 {
            return false;
        }
        let mut y = x;
        while y != 0 {
            let e = y & y.wrapping_neg();
            y &= y - 1;
            if self.rank(x ^ e) != k - 1 {
                return false;
            }
        }
        true
    }
}

/// Connectivity summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub simple: bool,
    pub cosimple: bool,
    pub three_connected: bool,
}

impl BasisMatroid {
    pub fn rank_table(&self) -> RankTable {
        RankTable::new(self)
    }

    /// `c1[e]` = bases containing e, `c2[e*n+f]` = bases containing both.
    pub fn incidence_counts(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.n();
        let mut c1 = vec![0u32; n];
        let mut c2 = vec![0u32; n * n];
        let mut elems = [0usize; 16];
        for b in self.bases() {
            let mut k = 0;
            let mut y = b;
            while y != 0 {
                elems[k] = y.trailing_zeros() as usize;
                y &= y - 1;
                k += 1;
            }
            for i in 0..k {
                let e = elems[i];
                c1[e] += 1;
                for &f in &elems[i + 1..k] {
                    c2[e * n + f] += 1;
                    c2[f * n + e] += 1;
                }
            }
        }
        (c1, c2)
    }

    pub fn is_simple(&self) -> bool {
        let (c1, c2) = self.incidence_counts();
        simple_from_counts(self.n(), &c1, &c2)
    }

    pub fn is_cosimple(&self) -> bool {
        let (c1, c2) = self.incidence_counts();
        cosimple_from_counts(self.n(), self.basis_count() as u32, &c1, &c2)
    }

    pub fn is_simple_and_cosimple(&self) -> bool {
        let (c1, c2) = self.incidence_counts();
        simple_from_counts(self.n(), &c1, &c2)
            && cosimple_from_counts(self.n(), self.basis_count() as u32, &c1, &c2)
    }

    /// No 1- or 2-separations, checked over all subsets.
    pub fn is_3connected(&self) -> bool {
        self.is_3connected_with(&self.rank_table())
    }

    pub fn is_3connected_with(&self, rt: &RankTable) -> bool {
        let n = self.n();
        let full = self.ground();
        for x in 1..full {
            let k = x.count_ones() as usize;
            let lam = rt.connectivity(x);
            if lam < 1 {
                return false;
            }
            if k >= 2 && n - k >= 2 && lam < 2 {
                return false;
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        let rt = self.rank_table();
        (1..self.ground()).all(|x| rt.connectivity(x) >= 1)
    }

    pub fn predicates(&self) -> Predicates {
        let (c1, c2) = self.incidence_counts();
        Predicates {
            simple: simple_from_counts(self.n(), &c1, &c2),
            cosimple: cosimple_from_counts(self.n(), self.basis_count() as u32, &c1, &c2),
            three_connected: self.is_3connected(),
        }
    }

    pub fn closure(&self, x: u32) -> u32 {
        let rx = self.rank_of(x);
        let mut c = x;
        for e in 0..self.n() {
            let b = 1u32 << e;
            if x & b == 0 && self.rank_of(x | b) == rx {
                c |= b;
            }
        }
        c
    }

    /// Sets that are both circuits and hyperplanes.
    pub fn circuit_hyperplanes(&self) -> Vec<u32> {
        let r = self.rank();
        if r == 0 {
            return Vec::new();
        }
        let rt = self.rank_table();
        super::colex::tables()
            .subsets(self.n(), r)
            .iter()
            .map(|&s| s as u32)
            .filter(|&x| !self.is_basis(x) && rt.is_circuit(x) && rt.is_flat(x) && rt.rank(x) == r - 1)
            .collect()
    }

    /// Promotes a circuit-hyperplane to a basis.
    pub fn relax(&self, ch: u32) -> Result<BasisMatroid> {
        let rt = self.rank_table();
        let r = self.rank();
        if ch.count_ones() as usize != r || self.is_basis(ch) || !rt.is_circuit(ch) || !rt.is_flat(ch) {
            return Err(Error::Precondition(format!(
                "{:?} is not a circuit-hyperplane",
                super::basis::elements_of(ch)
            )));
        }
        Ok(self.with_basis(ch))
    }
}

fn simple_from_counts(n: usize, c1: &[u32], c2: &[u32]) -> bool {
    if c1.iter().any(|&c| c == 0) {
        return false;
    }
    for e in 0..n {
        for f in e + 1..n {
            if c2[e * n + f] == 0 {
                return false;
            }
        }
    }
    true
}

fn cosimple_from_counts(n: usize, total: u32, c1: &[u32], c2: &[u32]) -> bool {
    if c1.iter().any(|&c| c == total) {
        return false;
    }
    for e in 0..n {
        for f in e + 1..n {
            // series pair: every basis meets {e, f}
            if c1[e] + c1[f] - c2[e * n + f] == total {
                return false;
            }
        }
    }
    true
}
