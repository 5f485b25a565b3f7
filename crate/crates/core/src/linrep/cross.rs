//! Cross ratios of a representation.
//!
//! Every 2x2 submatrix of a reduced matrix (after any pivoting) lives in a
//! rank-2 contraction `M / T` with `T` independent of size `r - 2`. Projecting
//! along `span(T)` sends each element to a point of the projective line, and
//! the cross ratios of the representation are exactly the cross ratios of
//! four distinct projected points, over all such hyperlines. This is far
//! cheaper than walking all bases, which [`cross_ratios_by_pivoting`] does as
//! a reference.

use std::collections::{BTreeSet, HashSet};

use super::linalg::{dot, null_space};
use super::LinearRep;
use crate::field::{Elem, FieldSpec};
use crate::pfield::field_associates;

/// A point of the projective line, normalized to `(1, t)` or `(0, 1)`.
pub type Point = (Elem, Elem);

pub(crate) fn project(f: &FieldSpec, f1: &[Elem], f2: &[Elem], v: &[Elem]) -> Option<Point> {
    let u = dot(f, f1, v);
    let w = dot(f, f2, v);
    if u != 0 {
        Some((1, f.div(w, u)))
    } else if w != 0 {
        Some((0, 1))
    } else {
        None
    }
}

/// Index of a point among the `q + 1` points of the line.
#[inline]
pub(crate) fn point_index(q: u32, p: Point) -> usize {
    if p.0 == 1 {
        p.1 as usize
    } else {
        q as usize
    }
}

#[inline]
fn bracket(f: &FieldSpec, a: Point, b: Point) -> Elem {
    f.sub(f.mul(a.0, b.1), f.mul(a.1, b.0))
}

/// Cross ratio `[13][24] / ([14][23])` of four distinct points.
#[inline]
pub(crate) fn cross_ratio(f: &FieldSpec, p: [Point; 4]) -> Elem {
    let num = f.mul(bracket(f, p[0], p[2]), bracket(f, p[1], p[3]));
    let den = f.mul(bracket(f, p[0], p[3]), bracket(f, p[1], p[2]));
    f.div(num, den)
}

pub struct Hyperline {
    /// Elements projecting to zero, i.e. the flat itself.
    pub flat: u32,
    pub f1: Vec<Elem>,
    pub f2: Vec<Elem>,
    /// Distinct projected points in first-seen order.
    pub points: Vec<Point>,
    /// Some point is hit by two elements.
    pub repeated: bool,
    /// Largest coordinate on which the annihilator is supported.
    pub max_row: usize,
}

impl Hyperline {
    pub(crate) fn new(f: &FieldSpec, f1: Vec<Elem>, f2: Vec<Elem>, vectors: &[Vec<Elem>]) -> Hyperline {
        let mut flat = 0u32;
        let mut points: Vec<Point> = Vec::new();
        let mut repeated = false;
        for (e, v) in vectors.iter().enumerate() {
            match project(f, &f1, &f2, v) {
                None => flat |= 1 << e,
                Some(p) => {
                    if points.contains(&p) {
                        repeated = true;
                    } else {
                        points.push(p);
                    }
                }
            }
        }
        let max_row = (0..f1.len()).rev().find(|&i| f1[i] != 0 || f2[i] != 0).unwrap_or(0);
        Hyperline { flat, f1, f2, points, repeated, max_row }
    }

    /// True iff every four distinct points have an allowed cross ratio.
    pub fn confined(&self, f: &FieldSpec, allowed: &[bool]) -> bool {
        let p = &self.points;
        let m = p.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    for d in c + 1..m {
                        if !allowed[cross_ratio(f, [p[a], p[b], p[c], p[d]]) as usize] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn collect(&self, f: &FieldSpec, out: &mut BTreeSet<Elem>) {
        let p = &self.points;
        let m = p.len();
        if m >= 3 && self.repeated {
            out.insert(1);
        }
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    for d in c + 1..m {
                        for x in field_associates(f, cross_ratio(f, [p[a], p[b], p[c], p[d]])) {
                            out.insert(x);
                        }
                    }
                }
            }
        }
    }
}

/// All hyperlines of a representation, one per flat.
pub struct Hyperlines {
    pub lines: Vec<Hyperline>,
}

/// Calls `visit` on each `k`-subset of `0..n` given as a mask.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(u32)) {
    for &s in crate::matroid::colex::tables().subsets(n, k) {
        visit(s as u32);
    }
}

pub(crate) fn elements(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

impl Hyperlines {
    pub fn of(rep: &LinearRep) -> Hyperlines {
        let vectors = rep.vectors();
        Self::of_vectors(&rep.field, rep.r(), &vectors)
    }

    /// Hyperlines spanned by `(r-2)`-subsets of the given vectors in `F^r`.
    pub(crate) fn of_vectors(f: &FieldSpec, r: usize, vectors: &[Vec<Elem>]) -> Hyperlines {
        let n = vectors.len();
        let mut lines: Vec<Hyperline> = Vec::new();
        if r < 2 {
            return Hyperlines { lines };
        }
        let mut seen: HashSet<u32> = HashSet::new();
        for_each_subset(n, r - 2, |t| {
            if lines.iter().any(|h| t & !h.flat == 0) {
                return;
            }
            let vs: Vec<Vec<Elem>> = elements(t).map(|e| vectors[e].clone()).collect();
            let ns = null_space(f, &vs, r);
            if ns.len() != 2 {
                return;
            }
            let h = Hyperline::new(f, ns[0].clone(), ns[1].clone(), vectors);
            if seen.insert(h.flat) {
                lines.push(h);
            }
        });
        Hyperlines { lines }
    }
}

/// The set of cross ratios of `rep`.
pub fn cross_ratios(rep: &LinearRep) -> BTreeSet<Elem> {
    let mut out = BTreeSet::new();
    for h in Hyperlines::of(rep).lines {
        h.collect(&rep.field, &mut out);
    }
    out
}

/// True iff every cross ratio lies in the allowed set (indexed by element;
/// `allowed` must admit 0 and 1 and be closed under associates).
pub fn is_confined(rep: &LinearRep, allowed: &[bool]) -> bool {
    let vectors = rep.vectors();
    let f = &rep.field;
    let r = rep.r();
    if r < 2 {
        return true;
    }
    let n = vectors.len();
    let mut flats: Vec<u32> = Vec::new();
    let mut ok = true;
    for_each_subset(n, r - 2, |t| {
        if !ok || flats.iter().any(|&fl| t & !fl == 0) {
            return;
        }
        let vs: Vec<Vec<Elem>> = elements(t).map(|e| vectors[e].clone()).collect();
        let ns = null_space(f, &vs, r);
        if ns.len() != 2 {
            return;
        }
        let h = Hyperline::new(f, ns[0].clone(), ns[1].clone(), &vectors);
        flats.push(h.flat);
        if !h.confined(f, allowed) {
            ok = false;
        }
    });
    ok
}

/// Reference implementation: visit every reduced matrix reachable by
/// pivoting and read off the 2x2 submatrices directly.
pub fn cross_ratios_by_pivoting(rep: &LinearRep) -> BTreeSet<Elem> {
    let f = &rep.field;
    let mut out = BTreeSet::new();
    let mut seen: HashSet<u32> = HashSet::new();
    let key = |a: &LinearRep| a.rows.iter().fold(0u32, |m, &x| m | 1 << x);
    seen.insert(key(rep));
    let mut stack = vec![rep.clone()];
    while let Some(a) = stack.pop() {
        let (r, c) = (a.r(), a.c());
        for i1 in 0..r {
            for i2 in i1 + 1..r {
                for j1 in 0..c {
                    for j2 in j1 + 1..c {
                        let (w, x, y, z) = (a.get(i1, j1), a.get(i1, j2), a.get(i2, j1), a.get(i2, j2));
                        if w == 0 || x == 0 || y == 0 || z == 0 {
                            continue;
                        }
                        let ad = f.mul(w, z);
                        let bc = f.mul(x, y);
                        out.insert(f.div(bc, ad));
                        out.insert(f.div(ad, bc));
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..c {
                if a.get(i, j) != 0 {
                    let p = a.pivot(i, j).unwrap();
                    if seen.insert(key(&p)) {
                        stack.push(p);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(q: u32, rows: &[Vec<i64>]) -> LinearRep {
        LinearRep::from_rows(FieldSpec::new(q).unwrap(), rows).unwrap()
    }

    fn allowed(q: u32, f: &[u32]) -> Vec<bool> {
        let mut t = vec![false; q as usize];
        t[0] = true;
        t[1] = true;
        for &x in f {
            t[x as usize] = true;
        }
        t
    }

    #[test]
    fn small_examples() {
        let a = rep(11, &[vec![1, 1], vec![2, 1]]);
        assert_eq!(cross_ratios(&a), BTreeSet::from([2, 6, 10]));
        assert_eq!(cross_ratios_by_pivoting(&a), BTreeSet::from([2, 6, 10]));
        assert!(is_confined(&a, &allowed(11, &[2, 6, 10])));
        assert!(!is_confined(&a, &allowed(11, &[6, 10])));
        let b = rep(3, &[vec![1, 1], vec![1, 2]]);
        assert_eq!(cross_ratios(&b), BTreeSet::from([2]));
        let c = rep(2, &[vec![1, 0], vec![0, 1]]);
        assert!(cross_ratios(&c).is_empty());
    }

    #[test]
    fn degenerate_two_by_two_gives_one() {
        // rank 2 with a repeated point: two parallel columns plus two more points
        let a = rep(5, &[vec![1, 1, 1], vec![1, 1, 2]]);
        assert!(cross_ratios_by_pivoting(&a).contains(&1));
        assert_eq!(cross_ratios(&a), cross_ratios_by_pivoting(&a));
    }
}
