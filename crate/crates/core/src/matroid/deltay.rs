//! Delta-Y and Y-Delta exchange through the generalized parallel connection
//! with a copy of M(K4).

use std::collections::VecDeque;

use super::basis::BasisMatroid;
use super::iso::Profile;
use super::structure::RankTable;
use super::{colex, isomorphism_with};
use crate::error::{Error, Result};

/// M(K4) on `a b c a' b' c'` (local indices 0..6), with `{a, b, c}` a
/// triangle, `{a', b', c'}` a triad, and `{a, b', c'}`, `{a', b, c'}`,
/// `{a', b', c}` triangles. As edges of K4 on vertices 0..4:
/// a = 12, b = 02, c = 01, a' = 03, b' = 13, c' = 23.
fn k4_closure_table() -> [u8; 64] {
    let edges = [(1, 2), (0, 2), (0, 1), (0, 3), (1, 3), (2, 3)];
    let rank = |mask: u8| -> usize {
        // Rank of a graphic edge set = vertices touched minus components.
        let mut parent = [0usize, 1, 2, 3];
        fn find(p: &mut [usize; 4], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut r = 0;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a] = b;
                    r += 1;
                }
            }
        }
        r
    };
    let mut table = [0u8; 64];
    for x in 0..64u8 {
        let rx = rank(x);
        let mut cl = x;
        for e in 0..6 {
            if rank(x | 1 << e) == rx {
                cl |= 1 << e;
            }
        }
        table[x as usize] = cl;
    }
    table
}

fn is_triangle(rt: &RankTable, t: u32) -> bool {
    t.count_ones() == 3 && rt.is_circuit(t)
}

/// Delta-Y exchange on the coindependent triangle `t` (a 3-element mask).
/// The new elements keep the labels of the triangle they replace.
pub fn delta_y(m: &BasisMatroid, t: u32) -> Result<BasisMatroid> {
    let n = m.n();
    let r = m.rank();
    let rt = m.rank_table();
    if !is_triangle(&rt, t) {
        return Err(Error::Precondition(format!("{t:#x} is not a triangle")));
    }
    if rt.rank(m.ground() & !t) != r {
        return Err(Error::Precondition(format!("triangle {t:#x} is not coindependent")));
    }
    if n + 3 > 32 {
        return Err(Error::Precondition("ground set too large".into()));
    }
    let tri: Vec<usize> = (0..n).filter(|&e| t >> e & 1 == 1).collect();
    let k4 = k4_closure_table();
    // P lives on 0..n (M) plus n, n+1, n+2 for a', b', c'. Shared: the triangle.
    let local_of = |x: u64| -> u8 {
        let mut l = 0u8;
        for (i, &e) in tri.iter().enumerate() {
            if x >> e & 1 == 1 {
                l |= 1 << i;
            }
        }
        for i in 0..3 {
            if x >> (n + i) & 1 == 1 {
                l |= 1 << (3 + i);
            }
        }
        l
    };
    let global_of = |l: u8| -> u64 {
        let mut x = 0u64;
        for (i, &e) in tri.iter().enumerate() {
            if l >> i & 1 == 1 {
                x |= 1 << e;
            }
        }
        for i in 0..3 {
            if l >> (3 + i) & 1 == 1 {
                x |= 1 << (n + i);
            }
        }
        x
    };
    let ground_m = m.ground() as u64;
    let closure = |x: u64| -> u64 {
        let mut cur = x;
        loop {
            let next = global_of(k4[local_of(cur) as usize]) | rt.closure((cur & ground_m) as u32) as u64 | cur;
            if next == cur {
                return cur;
            }
            cur = next;
        }
    };
    // Ground set of the result: E(M) with the triangle replaced by a', b', c'.
    let relabel = |mask: u32| -> u64 {
        let mut x = mask as u64 & !(t as u64);
        for (i, &e) in tri.iter().enumerate() {
            if mask >> e & 1 == 1 {
                x |= 1 << (n + i);
            }
        }
        x
    };
    let tabs = colex::tables();
    let masks = tabs.subsets(n, r + 1).iter().map(|&s| s as u32).filter(|&s| {
        let x = relabel(s);
        let mut acc = 0u64;
        let mut rest = x;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            if closure(acc) >> e & 1 == 1 {
                return false;
            }
            acc |= 1 << e;
        }
        true
    });
    BasisMatroid::from_masks(n, r + 1, masks)
}

/// Y-Delta exchange on the independent triad `t`.
pub fn wye_delta(m: &BasisMatroid, t: u32) -> Result<BasisMatroid> {
    Ok(delta_y(&m.dual(), t)?.dual())
}

impl BasisMatroid {
    /// Coindependent triangles, as masks in increasing order.
    pub fn coindependent_triangles(&self) -> Vec<u32> {
        let rt = self.rank_table();
        let full = self.ground();
        colex::tables()
            .subsets(self.n(), 3)
            .iter()
            .map(|&s| s as u32)
            .filter(|&s| is_triangle(&rt, s) && rt.rank(full & !s) == self.rank())
            .collect()
    }

    /// Independent triads, as masks in increasing order.
    pub fn independent_triads(&self) -> Vec<u32> {
        self.dual().coindependent_triangles()
    }
}

/// The Delta-Y class of `m` up to isomorphism; with `with_duals`, the class
/// of `{m, m*}` instead.
pub fn delta_y_closure(m: &BasisMatroid, with_duals: bool) -> Vec<BasisMatroid> {
    let mut found: Vec<(BasisMatroid, Profile)> = Vec::new();
    let mut queue = VecDeque::new();
    let push = |x: BasisMatroid, found: &mut Vec<(BasisMatroid, Profile)>, queue: &mut VecDeque<BasisMatroid>| {
        let p = x.profile();
        if found.iter().any(|(y, q)| q.key == p.key && isomorphism_with(y, q, &x, &p).is_some()) {
            return;
        }
        found.push((x.clone(), p));
        queue.push_back(x);
    };
    push(m.clone(), &mut found, &mut queue);
    if with_duals {
        push(m.dual(), &mut found, &mut queue);
    }
    while let Some(x) = queue.pop_front() {
        for t in x.coindependent_triangles() {
            push(delta_y(&x, t).expect("checked triangle"), &mut found, &mut queue);
        }
        for t in x.independent_triads() {
            push(wye_delta(&x, t).expect("checked triad"), &mut found, &mut queue);
        }
        if with_duals {
            push(x.dual(), &mut found, &mut queue);
        }
    }
    found.into_iter().map(|(x, _)| x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graphic(nv: usize, edges: &[(usize, usize)]) -> BasisMatroid {
        let n = edges.len();
        let forest = |mask: u32| {
            let mut parent: Vec<usize> = (0..nv).collect();
            fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
                while p[x] != x {
                    x = p[x];
                }
                x
            }
            let mut r = 0;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a == b {
                        return None;
                    }
                    parent[a] = b;
                    r += 1;
                }
            }
            Some(r)
        };
        let r = (0..1u32 << n).filter_map(forest).max().unwrap();
        BasisMatroid::from_predicate(n, r, |b| forest(b).is_some()).unwrap()
    }

    #[test]
    fn k4_becomes_k23() {
        // Edges of K4; the first three form a triangle.
        let k4 = graphic(4, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)]);
        // Graph Delta-Y on triangle 012: new vertex 4 joined to 0, 1, 2.
        // The edge replacing 01 is the one opposite vertex 2, i.e. 4-2.
        let k23 = graphic(5, &[(4, 2), (4, 0), (4, 1), (0, 3), (1, 3), (2, 3)]);
        let y = delta_y(&k4, 0b111).unwrap();
        assert_eq!(y.rank(), 4);
        assert!(y.is_isomorphic(&k23));
        assert!(wye_delta(&y, 0b111).unwrap().is_isomorphic(&k4));
    }

    #[test]
    fn uniform_delta_class() {
        let u25 = BasisMatroid::uniform(2, 5);
        let y = delta_y(&u25, 0b111).unwrap();
        assert!(y.is_isomorphic(&BasisMatroid::uniform(3, 5)));
        assert_eq!(delta_y_closure(&u25, false).len(), 2);
        assert!(delta_y(&u25, 0b11).is_err());
    }
}
