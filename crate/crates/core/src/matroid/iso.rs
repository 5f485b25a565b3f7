//! Isomorphism invariants and isomorphism testing.

use super::basis::BasisMatroid;

/// 64-bit FNV-1a over little-endian encodings.
#[derive(Clone, Copy)]
pub struct StableHasher(u64);

impl Default for StableHasher {
    fn default() -> Self {
        StableHasher(0xcbf2_9ce4_8422_2325)
    }
}

impl StableHasher {
    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub fn write_u64(&mut self, v: u64) {
        self.write_bytes(&v.to_le_bytes());
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

pub fn stable_hash(values: &[u64]) -> u64 {
    let mut h = StableHasher::default();
    for &v in values {
        h.write_u64(v);
    }
    h.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    pub n: u8,
    pub r: u8,
    pub basis_count: u32,
    pub hash: u64,
}

/// Invariant data reused by the isomorphism search.
pub struct Profile {
    pub key: InvariantKey,
    /// Stable element colors.
    pub colors: Vec<u64>,
    pub c2: Vec<u32>,
}

fn refine(n: usize, colors: &mut Vec<u64>, c2: &[u32]) {
    let distinct = |c: &[u64]| {
        let mut v = c.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    let mut classes = distinct(colors);
    loop {
        let mut next = Vec::with_capacity(n);
        for e in 0..n {
            let mut nb: Vec<(u64, u32)> = (0..n).filter(|&f| f != e).map(|f| (colors[f], c2[e * n + f])).collect();
            nb.sort_unstable();
            let mut h = StableHasher::default();
            h.write_u64(colors[e]);
            for (c, k) in nb {
                h.write_u64(c);
                h.write_u64(k as u64);
            }
            next.push(h.finish());
        }
        let k = distinct(&next);
        *colors = next;
        if k == classes {
            return;
        }
        classes = k;
    }
}

impl BasisMatroid {
    pub fn profile(&self) -> Profile {
        let n = self.n();
        let (c1, c2) = self.incidence_counts();
        let mut colors: Vec<u64> = c1.iter().map(|&c| c as u64).collect();
        refine(n, &mut colors, &c2);
        let mut sorted = colors.clone();
        sorted.sort_unstable();
        let mut vals = vec![n as u64, self.rank() as u64, self.basis_count() as u64];
        vals.extend(sorted);
        let key = InvariantKey {
            n: n as u8,
            r: self.rank() as u8,
            basis_count: self.basis_count() as u32,
            hash: stable_hash(&vals),
        };
        Profile { key, colors, c2 }
    }

    pub fn invariant_key(&self) -> InvariantKey {
        self.profile().key
    }

    pub fn is_isomorphic(&self, other: &BasisMatroid) -> bool {
        self.isomorphism(other).is_some()
    }

    /// A permutation `p` with `self.relabel(p) == other`, if one exists.
    pub fn isomorphism(&self, other: &BasisMatroid) -> Option<Vec<usize>> {
        if self.n() != other.n() || self.rank() != other.rank() || self.basis_count() != other.basis_count() {
            return None;
        }
        let pa = self.profile();
        let pb = other.profile();
        isomorphism_with(self, &pa, other, &pb)
    }
}

/// Isomorphism search given precomputed profiles.
pub fn isomorphism_with(a: &BasisMatroid, pa: &Profile, b: &BasisMatroid, pb: &Profile) -> Option<Vec<usize>> {
    if pa.key != pb.key {
        return None;
    }
    if a == b {
        return Some((0..a.n()).collect());
    }
    let n = a.n();
    // Visit rare colors first.
    let mut order: Vec<usize> = (0..n).collect();
    let cell = |c: u64| pa.colors.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&e| (cell(pa.colors[e]), pa.colors[e], e));
    let mut search = Search {
        a,
        b,
        pa,
        pb,
        order,
        map: vec![usize::MAX; n],
        used: 0,
        prefix_a: 0,
        prefix_b: 0,
    };
    let la: Vec<u32> = a.bases().collect();
    let lb: Vec<u32> = b.bases().collect();
    if search.dfs(0, &la, &lb) {
        Some(search.map)
    } else {
        None
    }
}

struct Search<'a> {
    a: &'a BasisMatroid,
    b: &'a BasisMatroid,
    pa: &'a Profile,
    pb: &'a Profile,
    order: Vec<usize>,
    map: Vec<usize>,
    used: u32,
    prefix_a: u32,
    prefix_b: u32,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize, la: &[u32], lb: &[u32]) -> bool {
        let n = self.a.n();
        if k == n {
            return self.a.bases().all(|x| self.b.is_basis(self.image(x)));
        }
        let e = self.order[k];
        let ebit = 1u32 << e;
        let na: Vec<u32> = la.iter().copied().filter(|&x| x & ebit != 0).collect();
        for f in 0..n {
            let fbit = 1u32 << f;
            if self.used & fbit != 0 || self.pb.colors[f] != self.pa.colors[e] {
                continue;
            }
            let consistent = self.order[..k]
                .iter()
                .all(|&x| self.pa.c2[e * n + x] == self.pb.c2[f * n + self.map[x]]);
            if !consistent {
                continue;
            }
            let nb: Vec<u32> = lb.iter().copied().filter(|&x| x & fbit != 0).collect();
            if nb.len() != na.len() {
                continue;
            }
            self.map[e] = f;
            if !self.rsubsets_consistent(e, f) {
                self.map[e] = usize::MAX;
                continue;
            }
            self.used |= fbit;
            self.prefix_a |= ebit;
            self.prefix_b |= fbit;
            if self.dfs(k + 1, &na, &nb) {
                return true;
            }
            self.used &= !fbit;
            self.prefix_a &= !ebit;
            self.prefix_b &= !fbit;
            self.map[e] = usize::MAX;
        }
        false
    }

    fn image(&self, x: u32) -> u32 {
        let mut y = x;
        let mut out = 0;
        while y != 0 {
            let i = y.trailing_zeros() as usize;
            out |= 1 << self.map[i];
            y &= y - 1;
        }
        out
    }

    /// Every r-subset of the mapped elements containing `e` has the same
    /// basis status as its image.
    fn rsubsets_consistent(&self, e: usize, _f: usize) -> bool {
        let r = self.a.rank();
        if r == 0 || (self.prefix_a.count_ones() as usize) < r - 1 {
            return true;
        }
        let prefix: Vec<u32> = (0..self.a.n()).filter(|&i| self.prefix_a >> i & 1 == 1).map(|i| 1 << i).collect();
        let k = prefix.len();
        let need = r - 1;
        // Gosper's hack over index subsets of size r-1.
        if need == 0 {
            let x = 1u32 << e;
            return self.a.is_basis(x) == self.b.is_basis(self.image(x));
        }
        let mut s: u64 = (1u64 << need) - 1;
        let limit = 1u64 << k;
        while s < limit {
            let mut x = 1u32 << e;
            let mut t = s;
            while t != 0 {
                x |= prefix[t.trailing_zeros() as usize];
                t &= t - 1;
            }
            if self.a.is_basis(x) != self.b.is_basis(self.image(x)) {
                return false;
            }
            let c = s & s.wrapping_neg();
            let rr = s + c;
            s = (((rr ^ s) >> 2) / c) | rr;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        let mut h = StableHasher::default();
        h.write_bytes(b"a");
        assert_eq!(h.finish(), 0xaf63dc4c8601ec8c);
        assert_eq!(StableHasher::default().finish(), 0xcbf29ce484222325);
    }

    #[test]
    fn uniform_single_color_and_self_dual() {
        let u25 = BasisMatroid::uniform(2, 5);
        let p = u25.profile();
        assert!(p.colors.iter().all(|&c| c == p.colors[0]));
        let u24 = BasisMatroid::uniform(2, 4);
        assert!(u24.is_isomorphic(&u24.dual()));
        assert!(!u25.is_isomorphic(&u25.dual()));
    }

    #[test]
    fn witness_maps_bases() {
        let m = BasisMatroid::from_bases(4, 2, &[vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3], vec![0, 3]]).unwrap();
        let perm = vec![2, 0, 3, 1];
        let m2 = m.relabel(&perm);
        let p = m.isomorphism(&m2).unwrap();
        assert_eq!(m.relabel(&p), m2);
    }
}
