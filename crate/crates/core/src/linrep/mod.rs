//! Reduced matrix representations over finite fields.
//!
//! A [`LinearRep`] with row labels X and column labels Y represents the
//! matroid of `[I_X | A]`: a set B is a basis iff the submatrix of A on rows
//! `X - B` and columns `Y ∩ B` is square with nonzero determinant.

mod cross;
mod extend;
mod find;
mod linalg;
mod symbolic;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::matroid::{colex, BasisMatroid};

pub use cross::{cross_ratios, cross_ratios_by_pivoting, is_confined, Hyperlines};
pub use extend::{all_carrier_extensions, confined_simple_extensions, ExtensionContext, ExtensionMode};
pub use find::{find_confined_rep, find_rep};
pub use linalg::{det, null_space};
pub use symbolic::SymbolicMatrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearRep {
    pub field: FieldSpec,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Row-major, `rows.len() * cols.len()` entries.
    pub a: Vec<Elem>,
}

impl fmt::Debug for LinearRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinearRep over {} rows {:?} cols {:?}", self.field, self.rows, self.cols)?;
        for i in 0..self.r() {
            writeln!(f, "  {:?}", &self.a[i * self.c()..(i + 1) * self.c()])?;
        }
        Ok(())
    }
}

impl LinearRep {
    /// Rows labelled `0..r`, columns `r..r+c`.
    pub fn standard(field: FieldSpec, r: usize, c: usize, a: Vec<Elem>) -> Result<LinearRep> {
        if a.len() != r * c {
            return Err(Error::Parse(format!("expected {} entries, got {}", r * c, a.len())));
        }
        if r + c > colex::MAX_N {
            return Err(Error::InvalidMatroid(format!("{} elements exceed {}", r + c, colex::MAX_N)));
        }
        if let Some(&x) = a.iter().find(|&&x| x >= field.order()) {
            return Err(Error::Parse(format!("{x} is not an element of {field}")));
        }
        Ok(LinearRep { field, rows: (0..r).collect(), cols: (r..r + c).collect(), a })
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<LinearRep> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        let a = rows.iter().flatten().map(|&v| field.from_int(v)).collect();
        Self::standard(field, r, c, a)
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn c(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.r() + self.c()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.a[i * self.c() + j]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.r()).map(|i| self.get(i, j)).collect()
    }

    pub fn is_standard(&self) -> bool {
        self.rows.iter().copied().eq(0..self.r()) && self.cols.iter().copied().eq(self.r()..self.n())
    }

    /// The vector of element `e` in `[I | A]` coordinates.
    pub fn vector(&self, e: usize) -> Vec<Elem> {
        if let Some(i) = self.rows.iter().position(|&x| x == e) {
            let mut v = vec![0; self.r()];
            v[i] = 1;
            v
        } else {
            let j = self.cols.iter().position(|&y| y == e).expect("label of the representation");
            self.column(j)
        }
    }

    /// All element vectors, indexed by label.
    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.n()];
        for (i, &x) in self.rows.iter().enumerate() {
            let mut v = vec![0; self.r()];
            v[i] = 1;
            out[x] = v;
        }
        for (j, &y) in self.cols.iter().enumerate() {
            out[y] = self.column(j);
        }
        out
    }

    /// The represented matroid.
    pub fn matroid(&self) -> BasisMatroid {
        let n = self.n();
        let r = self.r();
        let c = self.c();
        let f = &self.field;
        let mut row_of = [usize::MAX; 16];
        let mut col_of = [usize::MAX; 16];
        for (i, &x) in self.rows.iter().enumerate() {
            row_of[x] = i;
        }
        for (j, &y) in self.cols.iter().enumerate() {
            col_of[y] = j;
        }
        let mut buf = Vec::with_capacity(r * r);
        let m = BasisMatroid::from_predicate(n, r, |b| {
            let sub_rows: Vec<usize> = self.rows.iter().filter(|&&x| b >> x & 1 == 0).map(|&x| row_of[x]).collect();
            let sub_cols: Vec<usize> = self.cols.iter().filter(|&&y| b >> y & 1 == 1).map(|&y| col_of[y]).collect();
            debug_assert_eq!(sub_rows.len(), sub_cols.len());
            let k = sub_rows.len();
            buf.clear();
            for &i in &sub_rows {
                for &j in &sub_cols {
                    buf.push(self.a[i * c + j]);
                }
            }
            linalg::det_in_place(f, &mut buf, k) != 0
        });
        // The identity block always yields the basis X, so `from_predicate` cannot fail.
        m.expect("X is a basis")
    }

    /// Exchanges row label `x` (row index `i`) with column label `y`
    /// (column index `j`).
    pub fn pivot(&self, i: usize, j: usize) -> Result<LinearRep> {
        let f = &self.field;
        let p = self.get(i, j);
        if p == 0 {
            return Err(Error::Precondition(format!("pivot entry ({i}, {j}) is zero")));
        }
        let pi = f.inv(p);
        let (r, c) = (self.r(), self.c());
        let mut a = vec![0; r * c];
        for u in 0..r {
            for v in 0..c {
                a[u * c + v] = if u == i && v == j {
                    pi
                } else if u == i {
                    f.mul(pi, self.get(i, v))
                } else if v == j {
                    f.neg(f.mul(pi, self.get(u, j)))
                } else {
                    f.sub(self.get(u, v), f.mul(pi, f.mul(self.get(u, j), self.get(i, v))))
                };
            }
        }
        let mut rows = self.rows.clone();
        let mut cols = self.cols.clone();
        std::mem::swap(&mut rows[i], &mut cols[j]);
        Ok(LinearRep { field: f.clone(), rows, cols, a })
    }

    /// `-A^T` with the label sets swapped.
    pub fn dual(&self) -> LinearRep {
        let (r, c) = (self.r(), self.c());
        let f = &self.field;
        let mut a = vec![0; r * c];
        for i in 0..r {
            for j in 0..c {
                a[j * r + i] = f.neg(self.get(i, j));
            }
        }
        LinearRep { field: f.clone(), rows: self.cols.clone(), cols: self.rows.clone(), a }
    }

    /// The dual, relabelled so that its rows come first.
    pub fn dual_standard(&self) -> LinearRep {
        let d = self.dual();
        LinearRep { rows: (0..d.r()).collect(), cols: (d.r()..d.n()).collect(), ..d }
    }

    /// Appends a column with the next free label.
    pub fn with_column(&self, z: &[Elem]) -> LinearRep {
        assert_eq!(z.len(), self.r());
        let (r, c) = (self.r(), self.c());
        let mut a = Vec::with_capacity(r * (c + 1));
        for i in 0..r {
            a.extend_from_slice(&self.a[i * c..(i + 1) * c]);
            a.push(z[i]);
        }
        let mut cols = self.cols.clone();
        cols.push(self.n());
        LinearRep { field: self.field.clone(), rows: self.rows.clone(), cols, a }
    }

    /// Drops column `j` and relabels to the standard order.
    pub fn without_column(&self, j: usize) -> LinearRep {
        let (r, c) = (self.r(), self.c());
        let mut a = Vec::with_capacity(r * (c - 1));
        for i in 0..r {
            for v in 0..c {
                if v != j {
                    a.push(self.get(i, v));
                }
            }
        }
        LinearRep::standard(self.field.clone(), r, c - 1, a).unwrap()
    }

    /// Relabels so that the matroid of the result is `self.matroid()` with
    /// element `rows[i]` renamed `i` and `cols[j]` renamed `r + j`.
    pub fn standardized(&self) -> LinearRep {
        LinearRep { rows: (0..self.r()).collect(), cols: (self.r()..self.n()).collect(), ..self.clone() }
    }

    /// Permutation taking the labels of `self` to the standard order.
    pub fn standard_relabelling(&self) -> Vec<usize> {
        let mut p = vec![0; self.n()];
        for (i, &x) in self.rows.iter().enumerate() {
            p[x] = i;
        }
        for (j, &y) in self.cols.iter().enumerate() {
            p[y] = self.r() + j;
        }
        p
    }

    /// `L <q> <r> <c> <entries>`, row-major.
    pub fn serialize(&self) -> String {
        let mut s = format!("L {} {} {}", self.field.order(), self.r(), self.c());
        for &x in &self.a {
            s.push(' ');
            s.push_str(&x.to_string());
        }
        s
    }

    pub fn parse(line: &str) -> Result<LinearRep> {
        let bad = |why: &str| Error::Parse(format!("matrix line {line:?}: {why}"));
        let mut it = line.split_whitespace();
        if it.next() != Some("L") {
            return Err(bad("expected L"));
        }
        let mut num = || -> Result<u32> { it.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad number")) };
        let q = num()?;
        let r = num()? as usize;
        let c = num()? as usize;
        let field = FieldSpec::new(q)?;
        let mut a = Vec::with_capacity(r * c);
        for _ in 0..r * c {
            a.push(num()?);
        }
        if it.next().is_some() {
            return Err(bad("trailing entries"));
        }
        Self::standard(field, r, c, a)
    }

    /// True iff `other = D1 * self * D2` for invertible diagonal D1, D2, with
    /// identical labels.
    pub fn scaling_equivalent(&self, other: &LinearRep) -> bool {
        if self.field != other.field || self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let (r, c) = (self.r(), self.c());
        let f = &self.field;
        if (0..r * c).any(|k| (self.a[k] == 0) != (other.a[k] == 0)) {
            return false;
        }
        // other[i][j] = rs[i] * self[i][j] * cs[j]; fix factors along a spanning forest.
        let mut rs: Vec<Option<Elem>> = vec![None; r];
        let mut cs: Vec<Option<Elem>> = vec![None; c];
        for start in 0..r {
            if rs[start].is_some() {
                continue;
            }
            rs[start] = Some(1);
            let mut stack = vec![(true, start)];
            while let Some((is_row, k)) = stack.pop() {
                if is_row {
                    let s = rs[k].unwrap();
                    for j in 0..c {
                        if self.get(k, j) != 0 && cs[j].is_none() {
                            cs[j] = Some(f.div(other.get(k, j), f.mul(s, self.get(k, j))));
                            stack.push((false, j));
                        }
                    }
                } else {
                    let t = cs[k].unwrap();
                    for i in 0..r {
                        if self.get(i, k) != 0 && rs[i].is_none() {
                            rs[i] = Some(f.div(other.get(i, k), f.mul(t, self.get(i, k))));
                            stack.push((true, i));
                        }
                    }
                }
            }
        }
        (0..r).all(|i| {
            (0..c).all(|j| {
                let (s, t) = (rs[i].unwrap(), cs[j].unwrap_or(1));
                f.mul(s, f.mul(self.get(i, j), t)) == other.get(i, j)
            })
        })
    }
}

/// Normalizes a nonzero vector so its first nonzero entry is 1.
pub fn normalize(field: &FieldSpec, v: &mut [Elem]) -> bool {
    match v.iter().position(|&x| x != 0) {
        None => false,
        Some(k) => {
            let s = field.inv(v[k]);
            for x in v.iter_mut() {
                *x = field.mul(*x, s);
            }
            true
        }
    }
}
