//! Single-element extensions of a representation by a new column.

use std::collections::HashSet;

use super::cross::{elements, for_each_subset, point_index, project, Hyperline, Hyperlines, Point};
use super::linalg::{dot, null_space};
use super::{normalize, LinearRep};
use crate::field::{Elem, FieldSpec};
use crate::matroid::{colex, BasisMatroid};

/// How much of the confinement of `[A | z]` is verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionMode {
    /// New cross ratios on hyperlines spanned by old elements, and on the
    /// hyperlines through the new element.
    Exact,
    /// Only hyperlines spanned by old elements.
    Fast,
    /// Recompute everything for `[A | z]` from scratch (reference).
    Scratch,
}

/// Precomputed data about a parent representation, shared by all its
/// candidate columns.
pub struct ExtensionContext<'a> {
    pub rep: &'a LinearRep,
    field: FieldSpec,
    vectors: Vec<Vec<Elem>>,
    parent: BasisMatroid,
    /// Normal of `span(S)` for each (r-1)-subset S, by colex index; `None`
    /// for dependent S.
    normals: Vec<Option<Vec<Elem>>>,
    existing: HashSet<Vec<Elem>>,
    /// Parent hyperlines with the positions a new point may take.
    lines: Vec<(Hyperline, Vec<bool>)>,
    by_row: Vec<Vec<usize>>,
    allowed: Option<Vec<bool>>,
}

impl<'a> ExtensionContext<'a> {
    /// `allowed` is `F ∪ {0, 1}` as a table; `None` means unrestricted.
    pub fn new(rep: &'a LinearRep, allowed: Option<&[bool]>) -> ExtensionContext<'a> {
        let field = rep.field.clone();
        let r = rep.r();
        let n = rep.n();
        let vectors = rep.vectors();
        let parent = rep.matroid();
        let t = colex::tables();
        let mut normals = Vec::with_capacity(t.binom(n, r.saturating_sub(1)));
        if r >= 1 {
            for_each_subset(n, r - 1, |s| {
                let vs: Vec<Vec<Elem>> = elements(s).map(|e| vectors[e].clone()).collect();
                let ns = null_space(&field, &vs, r);
                normals.push(if ns.len() == 1 { Some(ns.into_iter().next().unwrap()) } else { None });
            });
        }
        let mut existing = HashSet::new();
        for v in &vectors {
            let mut w = v.clone();
            if normalize(&field, &mut w) {
                existing.insert(w);
            }
        }
        let mut lines = Vec::new();
        let mut by_row = vec![Vec::new(); r.max(1)];
        if let Some(allowed) = allowed {
            for h in Hyperlines::of_vectors(&field, r, &vectors).lines {
                let table = new_point_table(&field, &h.points, allowed);
                by_row[h.max_row].push(lines.len());
                lines.push((h, table));
            }
        }
        ExtensionContext {
            rep,
            field,
            vectors,
            parent,
            normals,
            existing,
            lines,
            by_row,
            allowed: allowed.map(|a| a.to_vec()),
        }
    }

    pub fn parent(&self) -> &BasisMatroid {
        &self.parent
    }

    /// The matroid of `[A | z]`.
    pub fn extension_matroid(&self, z: &[Elem]) -> BasisMatroid {
        let n = self.rep.n();
        let t = colex::tables();
        let new_bit = 1u32 << n;
        self.parent.extend_with(|s| match &self.normals[t.index(s ^ new_bit)] {
            Some(nv) => dot(&self.field, nv, z) != 0,
            None => false,
        })
    }

    /// Nonzero and not parallel to an existing element.
    pub fn is_simple_column(&self, z: &[Elem]) -> bool {
        let mut w = z.to_vec();
        normalize(&self.field, &mut w) && !self.existing.contains(&w)
    }

    fn line_ok(&self, k: usize, z: &[Elem]) -> bool {
        let (h, table) = &self.lines[k];
        match project(&self.field, &h.f1, &h.f2, z) {
            None => true,
            Some(p) => table[point_index(self.field.order(), p)],
        }
    }

    /// Confinement of `[A | z]`, assuming `A` itself is confined.
    pub fn confined_column(&self, z: &[Elem], mode: ExtensionMode) -> bool {
        let allowed = self.allowed.as_ref().expect("context built with a confinement set");
        match mode {
            ExtensionMode::Scratch => super::is_confined(&self.rep.with_column(z), allowed),
            ExtensionMode::Fast => (0..self.lines.len()).all(|k| self.line_ok(k, z)),
            ExtensionMode::Exact => {
                (0..self.lines.len()).all(|k| self.line_ok(k, z)) && self.new_hyperlines_confined(z, allowed)
            }
        }
    }

    /// Hyperlines of `[A | z]` through the new element that are not spanned
    /// by old elements.
    fn new_hyperlines_confined(&self, z: &[Elem], allowed: &[bool]) -> bool {
        let r = self.rep.r();
        let n = self.rep.n();
        if r < 3 {
            return true;
        }
        let f = &self.field;
        let mut seen: Vec<u32> = Vec::new();
        let mut ok = true;
        for_each_subset(n, r - 3, |t0| {
            if !ok || seen.iter().any(|&fl| t0 & !fl == 0) {
                return;
            }
            let mut vs: Vec<Vec<Elem>> = elements(t0).map(|e| self.vectors[e].clone()).collect();
            vs.push(z.to_vec());
            let ns = null_space(f, &vs, r);
            if ns.len() != 2 {
                return;
            }
            let h = Hyperline::new(f, ns[0].clone(), ns[1].clone(), &self.vectors);
            seen.push(h.flat);
            let in_flat: Vec<Vec<Elem>> = elements(h.flat).map(|e| self.vectors[e].clone()).collect();
            if null_space(f, &in_flat, r).len() == 2 {
                // Spanned by old elements: covered by the parent hyperlines.
                return;
            }
            if !h.confined(f, allowed) {
                ok = false;
            }
        });
        ok
    }

    /// Scaling classes of columns `z` with `[A | z]` simple and confined.
    pub fn confined_simple_extensions(&self, mode: ExtensionMode) -> Vec<Vec<Elem>> {
        let r = self.rep.r();
        let mut out = Vec::new();
        let mut z = vec![0; r];
        self.backtrack(0, false, &mut z, mode, &mut out);
        out
    }

    fn backtrack(&self, row: usize, started: bool, z: &mut Vec<Elem>, mode: ExtensionMode, out: &mut Vec<Vec<Elem>>) {
        let r = z.len();
        if row == r {
            if started && self.is_simple_column(z) {
                let keep = match mode {
                    ExtensionMode::Fast => true,
                    _ => self.confined_column(z, mode),
                };
                if keep {
                    out.push(z.clone());
                }
            }
            return;
        }
        let q = self.field.order();
        let values: Box<dyn Iterator<Item = Elem>> = if started { Box::new(0..q) } else { Box::new(0..2) };
        for v in values {
            z[row] = v;
            if self.by_row[row].iter().all(|&k| self.line_ok(k, z)) {
                self.backtrack(row + 1, started || v != 0, z, mode, out);
            }
        }
        z[row] = 0;
    }

    /// A column `w` for this (carrier) representation with
    /// `matroid([self.rep | w]) == target`, searched over the given support
    /// with pairwise-determinant pruning against the reference pattern.
    pub fn matching_column(&self, reference: &LinearRep, z: &[Elem], target: &BasisMatroid) -> Option<Vec<Elem>> {
        let support: Vec<usize> = (0..z.len()).filter(|&i| z[i] != 0).collect();
        let mut w = vec![0; z.len()];
        if support.is_empty() {
            return None;
        }
        w[support[0]] = 1;
        self.match_rec(reference, z, target, &support, 1, &mut w)
    }

    fn match_rec(
        &self,
        reference: &LinearRep,
        z: &[Elem],
        target: &BasisMatroid,
        support: &[usize],
        k: usize,
        w: &mut Vec<Elem>,
    ) -> Option<Vec<Elem>> {
        if k == support.len() {
            return (self.extension_matroid(w) == *target).then(|| w.clone());
        }
        let j = support[k];
        let f = &self.field;
        let rf = &reference.field;
        let c = self.rep.c();
        for v in 1..f.order() {
            w[j] = v;
            let ok = support[..k].iter().all(|&i| {
                (0..c).all(|col| {
                    let (a, b) = (self.rep.get(i, col), self.rep.get(j, col));
                    if a == 0 || b == 0 {
                        return true;
                    }
                    let here = f.sub(f.mul(a, w[j]), f.mul(b, w[i])) == 0;
                    let (ra, rb) = (reference.get(i, col), reference.get(j, col));
                    let there = rf.sub(rf.mul(ra, z[j]), rf.mul(rb, z[i])) == 0;
                    here == there
                })
            });
            if ok {
                if let Some(found) = self.match_rec(reference, z, target, support, k + 1, w) {
                    return Some(found);
                }
            }
        }
        w[j] = 0;
        None
    }
}

/// For each point of the line (indexed by [`point_index`]), whether adding it
/// to `points` keeps every cross ratio allowed.
fn new_point_table(f: &FieldSpec, points: &[Point], allowed: &[bool]) -> Vec<bool> {
    let q = f.order();
    let size = q as usize + 1;
    let m = points.len();
    let mut table = vec![true; size];
    if m < 3 {
        return table;
    }
    let targets: Vec<Elem> = (2..q).filter(|&x| allowed[x as usize]).collect();
    let mut hits = vec![0u32; size];
    let mut triples = 0u32;
    let br = |a: Point, b: Point| f.sub(f.mul(a.0, b.1), f.mul(a.1, b.0));
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b, c) = (points[i], points[j], points[k]);
                triples += 1;
                let ac = br(a, c);
                let bc = br(b, c);
                // Solve cr(a, b, c, t) = lambda for t.
                for &lambda in &targets {
                    let lb = f.mul(lambda, bc);
                    let t0 = f.sub(f.mul(ac, b.0), f.mul(lb, a.0));
                    let t1 = f.sub(f.mul(ac, b.1), f.mul(lb, a.1));
                    let p = if t0 != 0 { (1, f.div(t1, t0)) } else { (0, 1) };
                    hits[point_index(q, p)] += 1;
                }
            }
        }
    }
    for (pos, slot) in table.iter_mut().enumerate() {
        *slot = hits[pos] == triples;
    }
    for &p in points {
        table[point_index(q, p)] = true;
    }
    table
}

/// Free function form of [`ExtensionContext::confined_simple_extensions`].
pub fn confined_simple_extensions(rep: &LinearRep, allowed: &[bool], mode: ExtensionMode) -> Vec<Vec<Elem>> {
    ExtensionContext::new(rep, Some(allowed)).confined_simple_extensions(mode)
}

/// All scaling classes of nonzero columns not parallel to an element.
pub fn all_carrier_extensions(rep: &LinearRep) -> Vec<Vec<Elem>> {
    let f = &rep.field;
    let r = rep.r();
    let mut existing = HashSet::new();
    for v in rep.vectors() {
        let mut w = v;
        if normalize(f, &mut w) {
            existing.insert(w);
        }
    }
    let mut out = Vec::new();
    let q = f.order();
    for lead in 0..r {
        let free = r - lead - 1;
        let total = (q as u64).pow(free as u32);
        for code in 0..total {
            let mut z = vec![0; r];
            z[lead] = 1;
            let mut c = code;
            for x in z.iter_mut().skip(lead + 1).rev() {
                *x = (c % q as u64) as Elem;
                c /= q as u64;
            }
            if !existing.contains(&z) {
                out.push(z);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn carrier_extension_counts() {
        let f3 = FieldSpec::new(3).unwrap();
        let u24 = LinearRep::from_rows(f3, &[vec![1, 1], vec![1, 2]]).unwrap();
        assert_eq!(all_carrier_extensions(&u24).len(), 0);
        let f4 = FieldSpec::new(4).unwrap();
        let u24 = LinearRep::standard(f4, 2, 2, vec![1, 1, 1, 2]).unwrap();
        assert_eq!(all_carrier_extensions(&u24).len(), 1);
        let f3 = FieldSpec::new(3).unwrap();
        let u23 = LinearRep::from_rows(f3, &[vec![1], vec![1]]).unwrap();
        assert_eq!(all_carrier_extensions(&u23).len(), 1);
    }

    #[test]
    fn extension_matroid_matches_direct_construction() {
        let f = FieldSpec::new(11).unwrap();
        let a = LinearRep::from_rows(f, &[vec![1, 1], vec![2, 1]]).unwrap();
        let ctx = ExtensionContext::new(&a, None);
        for z in all_carrier_extensions(&a) {
            assert_eq!(ctx.extension_matroid(&z), a.with_column(&z).matroid());
        }
    }

    #[test]
    fn binary_extensions_unrestricted() {
        let f2 = FieldSpec::new(2).unwrap();
        let a = LinearRep::from_rows(f2, &[vec![1, 1], vec![1, 0], vec![0, 1]]).unwrap();
        let table = allowed(2, &[]);
        let ext = confined_simple_extensions(&a, &table, ExtensionMode::Exact);
        assert_eq!(ext, all_carrier_extensions(&a));
    }

    #[test]
    fn u24_over_gf211_extends_to_u25() {
        let f = FieldSpec::new(211).unwrap();
        let a = LinearRep::from_rows(f, &[vec![1, 1], vec![1, 4]]).unwrap();
        let u2 = [4u32, 11, 21, 24, 38, 44, 50, 53, 55, 57, 60, 70, 94, 96, 102, 110, 116, 118, 142, 152, 155, 157, 159, 162, 168, 174, 188, 191, 201, 208];
        let table = allowed(211, &u2);
        let ext = confined_simple_extensions(&a, &table, ExtensionMode::Exact);
        assert!(ext.contains(&vec![1, 44]));
        for z in &ext {
            assert!(super::super::is_confined(&a.with_column(z), &table));
            assert_eq!(a.with_column(z).matroid(), BasisMatroid::uniform(2, 5));
        }
    }
}
