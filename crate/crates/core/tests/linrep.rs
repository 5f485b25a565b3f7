use std::collections::BTreeSet;

use minorforge::linrep::{
    all_carrier_extensions, cross_ratios, cross_ratios_by_pivoting, find_confined_rep, find_rep, is_confined,
    ExtensionContext, ExtensionMode, LinearRep,
};
use minorforge::matroid::BasisMatroid;
use minorforge::pfield::field_associates;
use minorforge::{Elem, FieldSpec};
use proptest::prelude::*;

const FIELDS: [u32; 6] = [2, 3, 4, 5, 7, 11];

fn arb_rep(max_r: usize, max_c: usize) -> impl Strategy<Value = LinearRep> {
    (0..FIELDS.len(), 1..=max_r, 1..=max_c).prop_flat_map(|(fi, r, c)| {
        let q = FIELDS[fi];
        proptest::collection::vec(0..q, r * c)
            .prop_map(move |a| LinearRep::standard(FieldSpec::new(q).unwrap(), r, c, a).unwrap())
    })
}

fn allowed_from(f: &FieldSpec, set: &BTreeSet<Elem>) -> Vec<bool> {
    let mut t = vec![false; f.order() as usize];
    t[0] = true;
    t[1] = true;
    for &x in set {
        for y in field_associates(f, x) {
            t[y as usize] = true;
        }
    }
    t
}

/// Scales rows and columns by the given nonzero factors.
fn scaled(a: &LinearRep, rs: &[Elem], cs: &[Elem]) -> LinearRep {
    let f = &a.field;
    let mut b = a.clone();
    for i in 0..a.r() {
        for j in 0..a.c() {
            b.a[i * a.c() + j] = f.mul(rs[i], f.mul(a.get(i, j), cs[j]));
        }
    }
    b
}

fn nonzero_factors(q: u32, k: usize, seed: &[u32]) -> Vec<Elem> {
    (0..k).map(|i| 1 + seed.get(i).copied().unwrap_or(0) % (q - 1)).collect()
}

/// Every normalized nonzero column, simple or not.
fn all_columns(f: &FieldSpec, r: usize) -> Vec<Vec<Elem>> {
    let q = f.order();
    let mut out = Vec::new();
    for code in 1..(q as u64).pow(r as u32) {
        let mut z = vec![0; r];
        let mut c = code;
        for x in z.iter_mut() {
            *x = (c % q as u64) as Elem;
            c /= q as u64;
        }
        let lead = z.iter().position(|&x| x != 0).unwrap();
        if z[lead] == 1 {
            out.push(z);
        }
    }
    out
}

fn is_simple_with(a: &LinearRep, z: &[Elem]) -> bool {
    let m = a.with_column(z).matroid();
    let last = a.n();
    m.rank_of(1 << last) == 1 && (0..a.n()).all(|e| m.rank_of(1 << e) == 0 || m.rank_of(1 << e | 1 << last) == 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hyperline_cross_ratios_match_pivot_closure(a in arb_rep(4, 4)) {
        prop_assert_eq!(cross_ratios(&a), cross_ratios_by_pivoting(&a));
    }

    #[test]
    fn pivoting_and_scaling_preserve_matroid_and_cross_ratios(
        a in arb_rep(4, 4),
        pivots in proptest::collection::vec((0usize..4, 0usize..4), 0..6),
        seed in proptest::collection::vec(0u32..1000, 8),
    ) {
        let m = a.matroid();
        let cr = cross_ratios(&a);
        let mut b = a.clone();
        for (i, j) in pivots {
            let (i, j) = (i % b.r(), j % b.c());
            if b.get(i, j) != 0 {
                b = b.pivot(i, j).unwrap();
            }
        }
        prop_assert_eq!(b.matroid(), m.clone());
        prop_assert_eq!(cross_ratios(&b), cr.clone());
        let q = a.field.order();
        let s = scaled(&b, &nonzero_factors(q, b.r(), &seed), &nonzero_factors(q, b.c(), &seed[4..]));
        prop_assert_eq!(s.matroid(), m);
        prop_assert_eq!(cross_ratios(&s), cr);
    }

    #[test]
    fn cross_ratios_closed_under_associates(a in arb_rep(4, 4)) {
        let cr = cross_ratios(&a);
        for &x in &cr {
            for y in field_associates(&a.field, x) {
                if y != 0 && y != 1 {
                    prop_assert!(cr.contains(&y), "{} in Cr but associate {} is not", x, y);
                }
            }
        }
    }

    #[test]
    fn duality_of_representations(a in arb_rep(4, 4)) {
        prop_assert_eq!(a.dual().matroid(), a.matroid().dual());
        prop_assert!(a.dual().dual().scaling_equivalent(&a));
        prop_assert_eq!(cross_ratios(&a.dual()), cross_ratios(&a));
    }

    #[test]
    fn confined_extensions_match_brute_force(a in arb_rep(4, 3), extra in 0u32..11) {
        let f = a.field.clone();
        let mut set = cross_ratios(&a);
        if extra >= 2 && extra < f.order() {
            set.insert(extra);
        }
        let allowed = allowed_from(&f, &set);
        prop_assume!(is_confined(&a, &allowed));
        let ctx = ExtensionContext::new(&a, Some(&allowed));
        let exact: BTreeSet<Vec<Elem>> = ctx.confined_simple_extensions(ExtensionMode::Exact).into_iter().collect();
        let fast: BTreeSet<Vec<Elem>> = ctx.confined_simple_extensions(ExtensionMode::Fast).into_iter().collect();
        let brute: BTreeSet<Vec<Elem>> = all_columns(&f, a.r())
            .into_iter()
            .filter(|z| is_simple_with(&a, z) && is_confined(&a.with_column(z), &allowed))
            .collect();
        prop_assert_eq!(&exact, &brute);
        prop_assert!(fast.is_superset(&exact));
        for z in &exact {
            prop_assert_eq!(ctx.extension_matroid(z), a.with_column(z).matroid());
        }
    }

    #[test]
    fn carrier_extensions_are_all_simple_columns(a in arb_rep(3, 3)) {
        let f = a.field.clone();
        let all: BTreeSet<Vec<Elem>> = all_carrier_extensions(&a).into_iter().collect();
        let brute: BTreeSet<Vec<Elem>> = all_columns(&f, a.r())
            .into_iter()
            .filter(|z| {
                let mut w = z.clone();
                minorforge::linrep::normalize(&f, &mut w);
                (0..a.n()).all(|e| {
                    let mut v = a.vector(e);
                    !minorforge::linrep::normalize(&f, &mut v) || v != w
                })
            })
            .collect();
        prop_assert_eq!(all, brute);
    }

    #[test]
    fn find_rep_recovers_a_representation(a in arb_rep(3, 4)) {
        let m = a.matroid();
        let found = find_rep(&m, &a.field).expect("m is representable over its own field");
        prop_assert_eq!(found.matroid(), m.clone());
        let allowed = allowed_from(&a.field, &cross_ratios(&a));
        if is_confined(&a, &allowed) {
            let c = find_confined_rep(&m, &a.field, Some(&allowed)).expect("a is a confined witness");
            prop_assert!(is_confined(&c, &allowed));
            prop_assert_eq!(c.matroid(), m);
        }
    }
}

#[test]
fn lockstep_carrier_columns_match_basis_sets() {
    let f11 = FieldSpec::new(11).unwrap();
    let f3 = FieldSpec::new(3).unwrap();
    // A dyadic rank-3 matrix and its ternary counterpart.
    let proxy = LinearRep::from_rows(f11.clone(), &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![0, 1, 1, 1]]).unwrap();
    let allowed = allowed_from(&f11, &BTreeSet::from([2]));
    assert!(is_confined(&proxy, &allowed));
    let carrier = find_rep(&proxy.matroid(), &f3).unwrap();
    let carrier = LinearRep { rows: proxy.rows.clone(), cols: proxy.cols.clone(), ..carrier };
    assert_eq!(carrier.matroid(), proxy.matroid());
    let pctx = ExtensionContext::new(&proxy, Some(&allowed));
    let cctx = ExtensionContext::new(&carrier, None);
    let exts = pctx.confined_simple_extensions(ExtensionMode::Exact);
    assert!(!exts.is_empty());
    for z in exts {
        let target = pctx.extension_matroid(&z);
        let w = cctx.matching_column(&proxy, &z, &target).expect("dyadic extensions are ternary");
        assert_eq!(carrier.with_column(&w).matroid(), proxy.with_column(&z).matroid());
    }
}

#[test]
fn named_representations() {
    let f3 = FieldSpec::new(3).unwrap();
    assert_eq!(LinearRep::from_rows(f3, &[vec![1, 1], vec![1, 2]]).unwrap().matroid(), BasisMatroid::uniform(2, 4));
    let f211 = FieldSpec::new(211).unwrap();
    let u25 = LinearRep::from_rows(f211.clone(), &[vec![1, 1, 1], vec![1, 4, 44]]).unwrap();
    assert_eq!(u25.matroid(), BasisMatroid::uniform(2, 5));
    assert_eq!(u25.dual().matroid(), BasisMatroid::uniform(3, 5));
    let f2 = FieldSpec::new(2).unwrap();
    assert!(find_rep(&BasisMatroid::uniform(2, 4), &f2).is_none());
}
