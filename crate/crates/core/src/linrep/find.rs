//! Searching for a representation of a given matroid.

use super::linalg::det;
use super::{is_confined, LinearRep};
use crate::field::{Elem, FieldSpec};
use crate::matroid::BasisMatroid;

/// A representation of `m` over `field` whose cross ratios are allowed by
/// `allowed` (`None` for no restriction). Rows are labelled by the first
/// basis of `m`, so `result.matroid() == *m`.
pub fn find_confined_rep(m: &BasisMatroid, field: &FieldSpec, allowed: Option<&[bool]>) -> Option<LinearRep> {
    let n = m.n();
    let basis = m.bases().next()?;
    let rows: Vec<usize> = (0..n).filter(|&e| basis >> e & 1 == 1).collect();
    let cols: Vec<usize> = (0..n).filter(|&e| basis >> e & 1 == 0).collect();
    let (r, c) = (rows.len(), cols.len());
    let support = |i: usize, j: usize| m.is_basis(basis & !(1 << rows[i]) | 1 << cols[j]);

    // Entries on a spanning forest of the support graph are normalized to 1.
    let mut a = vec![0 as Elem; r * c];
    let mut known = vec![false; r * c];
    let mut row_seen = vec![false; r];
    let mut col_seen = vec![false; c];
    for start in 0..r {
        if row_seen[start] {
            continue;
        }
        row_seen[start] = true;
        let mut stack = vec![(true, start)];
        while let Some((is_row, k)) = stack.pop() {
            if is_row {
                for j in 0..c {
                    if support(k, j) && !col_seen[j] {
                        col_seen[j] = true;
                        a[k * c + j] = 1;
                        known[k * c + j] = true;
                        stack.push((false, j));
                    }
                }
            } else {
                for i in 0..r {
                    if support(i, k) && !row_seen[i] {
                        row_seen[i] = true;
                        a[i * c + k] = 1;
                        known[i * c + k] = true;
                        stack.push((true, i));
                    }
                }
            }
        }
    }
    let mut free = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if !support(i, j) {
                known[i * c + j] = true;
            } else if !known[i * c + j] {
                free.push((i, j));
            }
        }
    }
    let mut s = Search { m, field, allowed, rows, cols, basis, a, known, free };
    s.run(0)
}

struct Search<'a> {
    m: &'a BasisMatroid,
    field: &'a FieldSpec,
    allowed: Option<&'a [bool]>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    basis: u32,
    a: Vec<Elem>,
    known: Vec<bool>,
    free: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn is_basis(&self, ri: &[usize], cj: &[usize]) -> bool {
        let mut mask = self.basis;
        for &i in ri {
            mask &= !(1 << self.rows[i]);
        }
        for &j in cj {
            mask |= 1 << self.cols[j];
        }
        self.m.is_basis(mask)
    }

    fn consistent(&self, i: usize, j: usize) -> bool {
        let (r, c) = (self.rows.len(), self.cols.len());
        let f = self.field;
        let at = |u: usize, v: usize| self.a[u * c + v];
        let kn = |u: usize, v: usize| self.known[u * c + v];
        for i2 in (0..r).filter(|&x| x != i) {
            for j2 in (0..c).filter(|&y| y != j) {
                if !(kn(i2, j) && kn(i, j2) && kn(i2, j2)) {
                    continue;
                }
                let (p, q, u, v) = (at(i, j), at(i, j2), at(i2, j), at(i2, j2));
                let main = f.mul(p, v);
                let anti = f.mul(q, u);
                if (main != anti) != self.is_basis(&[i, i2], &[j, j2]) {
                    return false;
                }
                if let Some(allowed) = self.allowed {
                    if main != 0 && anti != 0 && !allowed[f.div(main, anti) as usize] {
                        return false;
                    }
                }
            }
        }
        for i2 in (0..r).filter(|&x| x != i) {
            for i3 in (i2 + 1..r).filter(|&x| x != i) {
                for j2 in (0..c).filter(|&y| y != j) {
                    for j3 in (j2 + 1..c).filter(|&y| y != j) {
                        let rs = [i, i2, i3];
                        let cs = [j, j2, j3];
                        if !rs.iter().all(|&u| cs.iter().all(|&v| kn(u, v))) {
                            continue;
                        }
                        let sub: Vec<Elem> = rs.iter().flat_map(|&u| cs.iter().map(move |&v| at(u, v))).collect();
                        if (det(f, &sub, 3) != 0) != self.is_basis(&rs, &cs) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn leaf(&self) -> Option<LinearRep> {
        let rep = LinearRep { field: self.field.clone(), rows: self.rows.clone(), cols: self.cols.clone(), a: self.a.clone() };
        if rep.matroid() != *self.m {
            return None;
        }
        if let Some(allowed) = self.allowed {
            if !is_confined(&rep, allowed) {
                return None;
            }
        }
        Some(rep)
    }

    fn run(&mut self, k: usize) -> Option<LinearRep> {
        if k == self.free.len() {
            return self.leaf();
        }
        let (i, j) = self.free[k];
        let c = self.cols.len();
        self.known[i * c + j] = true;
        for v in 1..self.field.order() {
            self.a[i * c + j] = v;
            if self.consistent(i, j) {
                if let Some(rep) = self.run(k + 1) {
                    return Some(rep);
                }
            }
        }
        self.known[i * c + j] = false;
        self.a[i * c + j] = 0;
        None
    }
}

/// A representation of `m` over `field`, if one exists.
pub fn find_rep(m: &BasisMatroid, field: &FieldSpec) -> Option<LinearRep> {
    find_confined_rep(m, field, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_matroids() {
        let f2 = FieldSpec::new(2).unwrap();
        let f3 = FieldSpec::new(3).unwrap();
        let f4 = FieldSpec::new(4).unwrap();
        assert!(find_rep(&BasisMatroid::uniform(2, 4), &f2).is_none());
        let rep = find_rep(&BasisMatroid::uniform(2, 4), &f3).unwrap();
        assert_eq!(rep.matroid(), BasisMatroid::uniform(2, 4));
        assert!(find_rep(&BasisMatroid::uniform(2, 5), &f3).is_none());
        assert!(find_rep(&BasisMatroid::uniform(2, 5), &f4).is_some());
        assert!(find_rep(&BasisMatroid::uniform(3, 6), &f4).is_some());
        assert!(find_rep(&BasisMatroid::uniform(2, 6), &f4).is_none());
    }

    #[test]
    fn confinement_restricts() {
        let f5 = FieldSpec::new(5).unwrap();
        let u24 = BasisMatroid::uniform(2, 4);
        // U24 over GF(5) has cross ratios forming one associate class.
        let mut allowed = vec![true, true, false, false, false];
        assert!(find_confined_rep(&u24, &f5, Some(&allowed)).is_none());
        allowed[2] = true;
        allowed[3] = true;
        allowed[4] = true;
        assert!(find_confined_rep(&u24, &f5, Some(&allowed)).is_some());
    }
}
