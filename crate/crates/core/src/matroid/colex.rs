//! Colex ranking of subsets of `{0, .., 15}`.
//!
//! Among masks of equal popcount, colex order coincides with numeric order,
//! and the colex index of an r-subset does not depend on the ground set size.
//! One table therefore serves every `(n, r)`.

use std::sync::OnceLock;

pub const MAX_N: usize = 16;

pub struct Colex {
    /// Position of each mask among the masks of the same popcount.
    rank: Vec<u16>,
    /// Masks of each popcount in ascending order.
    by_pop: Vec<Vec<u16>>,
    binom: [[u32; MAX_N + 1]; MAX_N + 1],
}

static TABLES: OnceLock<Colex> = OnceLock::new();

pub fn tables() -> &'static Colex {
    TABLES.get_or_init(|| {
        let mut binom = [[0u32; MAX_N + 1]; MAX_N + 1];
        for n in 0..=MAX_N {
            binom[n][0] = 1;
            for k in 1..=n {
                binom[n][k] = binom[n - 1][k - 1] + if k <= n - 1 { binom[n - 1][k] } else { 0 };
            }
        }
        let mut by_pop = vec![Vec::new(); MAX_N + 1];
        let mut rank = vec![0u16; 1 << MAX_N];
        for m in 0..(1u32 << MAX_N) {
            let p = m.count_ones() as usize;
            rank[m as usize] = by_pop[p].len() as u16;
            by_pop[p].push(m as u16);
        }
        Colex { rank, by_pop, binom }
    })
}

impl Colex {
    #[inline]
    pub fn index(&self, mask: u32) -> usize {
        self.rank[mask as usize] as usize
    }

    #[inline]
    pub fn mask(&self, r: usize, index: usize) -> u32 {
        self.by_pop[r][index] as u32
    }

    /// All r-subsets of `{0..n-1}` in colex order.
    #[inline]
    pub fn subsets(&self, n: usize, r: usize) -> &[u16] {
        &self.by_pop[r][..self.binom(n, r)]
    }

    #[inline]
    pub fn binom(&self, n: usize, k: usize) -> usize {
        if k > n {
            0
        } else {
            self.binom[n][k] as usize
        }
    }
}

/// Colex index by the closed formula, used to cross-check the tables.
pub fn colex_index_formula(sorted: &[usize]) -> usize {
    let t = tables();
    sorted.iter().enumerate().map(|(i, &s)| t.binom(s, i + 1)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_formula() {
        let t = tables();
        for m in 0u32..(1 << MAX_N) {
            let elems: Vec<usize> = (0..MAX_N).filter(|&i| m >> i & 1 == 1).collect();
            assert_eq!(t.index(m), colex_index_formula(&elems));
            assert_eq!(t.mask(elems.len(), t.index(m)), m);
        }
        assert_eq!(t.subsets(5, 2).len(), 10);
        assert_eq!(t.binom(16, 8), 12870);
    }
}
