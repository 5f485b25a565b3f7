use minorforge::linrep::LinearRep;
use minorforge::matroid::catalog::{self, k2_matrix, p8_circuit_hyperplane_pair};
use minorforge::matroid::{delta_y, delta_y_closure, has_minor_iso, has_minor_iso_naive, wye_delta, BasisMatroid, MinorCache};
use minorforge::FieldSpec;
use proptest::prelude::*;

fn get(name: &str) -> BasisMatroid {
    catalog::get(name).unwrap()
}

fn arb_matroid(max_n: usize) -> impl Strategy<Value = BasisMatroid> {
    (prop::sample::select(vec![2u32, 3, 4, 5, 7]), 1..=4usize, 1..=4usize)
        .prop_filter("size", move |&(_, r, c)| r + c <= max_n)
        .prop_flat_map(|(q, r, c)| {
            proptest::collection::vec(0..q, r * c)
                .prop_map(move |a| LinearRep::standard(FieldSpec::new(q).unwrap(), r, c, a).unwrap().matroid())
        })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Exchange-axiom oracle written directly from the definition.
fn exchange_holds(bases: &[Vec<usize>]) -> bool {
    let set: std::collections::HashSet<Vec<usize>> = bases.iter().cloned().collect();
    for b1 in bases {
        for b2 in bases {
            for &x in b1.iter().filter(|x| !b2.contains(x)) {
                let ok = b2.iter().filter(|y| !b1.contains(y)).any(|&y| {
                    let mut b: Vec<usize> = b1.iter().copied().filter(|&e| e != x).collect();
                    b.push(y);
                    b.sort();
                    set.contains(&b)
                });
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn basic_constructions() {
    let bases: Vec<Vec<usize>> = vec![vec![0, 1], vec![2, 3]];
    let m = BasisMatroid::from_bases(4, 2, &bases).unwrap();
    assert!(!m.validate_exchange());
    assert!(!exchange_holds(&bases));
    assert!(BasisMatroid::from_bases(4, 2, &[]).is_err());
    assert!(get("TQ8").validate_exchange());
    assert_eq!(get("TQ8").rank_of(0b0011_0101), 3);
    assert_eq!(get("U2,5").rank_of(0b111), 2);
    assert_eq!(get("U2,5").rank_of(0), 0);
    assert_eq!(get("U3,6").contract(5), get("U2,5"));
}

#[test]
fn fano_deletions_are_k4() {
    let f7 = get("F7");
    let k4 = get("M(K4)");
    for e in 0..7 {
        assert!(f7.delete(e).is_isomorphic(&k4));
    }
    assert_eq!(f7.circuit_hyperplanes().len(), 7);
    assert!(f7.relax(f7.circuit_hyperplanes()[3]).unwrap().is_isomorphic(&get("F7-")));
    assert!(get("U2,5").circuit_hyperplanes().is_empty());
}

#[test]
fn predicates_of_named_matroids() {
    let u25 = get("U2,5").predicates();
    assert!(u25.simple && u25.cosimple && u25.three_connected);
    assert!(get("P8").is_3connected());
    let parallel = BasisMatroid::from_predicate(3, 2, |b| b != 0b011).unwrap();
    assert!(!parallel.is_simple());
}

#[test]
fn invariant_keys_separate_relaxations() {
    let keys: Vec<_> = ["F7", "F7-", "P8", "P8-", "P8="].iter().map(|n| get(n).invariant_key()).collect();
    assert_ne!(keys[0], keys[1]);
    assert_ne!(keys[2], keys[3]);
    assert_ne!(keys[3], keys[4]);
    assert_ne!(keys[2], keys[4]);
    let u25 = get("U2,5").profile();
    assert!(u25.colors.iter().all(|&c| c == u25.colors[0]));
}

#[test]
fn isomorphism_examples() {
    assert!(get("U2,4").is_isomorphic(&get("U2,4").dual()));
    assert!(!get("F7").is_isomorphic(&get("F7-")));
    assert!(get("P8").is_isomorphic(&get("P8").dual()));
}

#[test]
fn relaxations_of_p8() {
    let p8 = get("P8");
    let (a, b) = p8_circuit_hyperplane_pair(&p8);
    assert_eq!(a & b, 0);
    assert_eq!(get("P8=").basis_count(), p8.basis_count() + 2);
    let m = p8.relax(a).unwrap();
    assert!(m.validate_exchange());
    assert!(m.is_basis(a));
    assert_eq!(m.basis_count(), p8.basis_count() + 1);
}

#[test]
fn minor_examples() {
    let cache = MinorCache::new();
    assert!(has_minor_iso(&get("U3,6"), &get("U2,5"), &cache));
    assert!(!has_minor_iso(&get("AG23-e"), &get("U2,5"), &cache));
    assert!(has_minor_iso(&get("F7"), &get("M(K4)"), &cache));
}

#[test]
fn cached_and_naive_minor_checks_agree_on_small_catalog() {
    let names = [
        "U2,4", "U2,5", "U3,5", "U2,6", "U3,6", "U4,6", "F7", "F7*", "F7-", "F7-*", "F7=", "F7=*", "M(K4)", "AG23-e",
        "AG23-e*", "AG23-e-DY", "P6", "P8", "P8-", "P8=", "TQ8", "T8",
    ];
    let ms: Vec<BasisMatroid> = names.iter().map(|n| get(n)).collect();
    let cache = MinorCache::new();
    for (i, m) in ms.iter().enumerate() {
        for (j, n) in ms.iter().enumerate() {
            if n.n() > m.n() {
                continue;
            }
            assert_eq!(has_minor_iso(m, n, &cache), has_minor_iso_naive(m, n), "{} / {}", names[i], names[j]);
        }
    }
}

#[test]
fn delta_y_examples() {
    let m = get("AG23-e");
    for t in m.coindependent_triangles() {
        let y = delta_y(&m, t).unwrap();
        assert_eq!(y.rank(), m.rank() + 1);
        assert!(y.independent_triads().contains(&t));
        assert!(wye_delta(&y, t).unwrap().is_isomorphic(&m));
        assert!(y.is_isomorphic(&get("AG23-e-DY")));
    }
}

#[test]
fn delta_y_class_sizes() {
    for (name, size) in [
        ("U2,5", 2),
        ("F7", 2),
        ("AG23-e", 3),
        ("T8", 1),
        ("U2,6", 3),
        ("U3,6", 1),
        ("F7-", 2),
        ("F7=", 2),
        ("P8", 1),
        ("P8-", 1),
        ("P8=", 1),
        ("TQ8", 1),
    ] {
        assert_eq!(delta_y_closure(&get(name), false).len(), size, "{name}");
    }
}

#[test]
fn large_catalog_matrices() {
    let n3 = get("N3");
    assert_eq!((n3.n(), n3.rank()), (14, 7));
    assert!(n3.is_3connected());
    assert!(n3.is_isomorphic(&n3.dual()));
    let n4 = get("N4");
    assert_eq!((n4.n(), n4.rank()), (16, 8));
    let ch = n4.circuit_hyperplanes();
    assert!(ch.iter().any(|&a| ch.iter().any(|&b| a & b == 0)));
}

#[test]
fn two_cyclotomic_matrices_at_alpha_15() {
    let f73 = FieldSpec::new(73).unwrap();
    for name in ["F7=", "TQ8", "P8-"] {
        let rep = k2_matrix(name).unwrap().apply_hom(&f73, &[15]).unwrap();
        assert!(rep.matroid().is_isomorphic(&get(name)), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_is_an_involution(m in arb_matroid(8)) {
        prop_assert_eq!(m.dual().dual(), m.clone());
        prop_assert_eq!(m.rank() + m.dual().rank(), m.n());
        prop_assert_eq!(m.is_3connected(), m.dual().is_3connected());
    }

    #[test]
    fn exchange_axiom_matches_oracle(m in arb_matroid(7)) {
        let bases: Vec<Vec<usize>> = m.bases().map(minorforge::matroid::elements_of).collect();
        prop_assert!(exchange_holds(&bases));
        prop_assert!(m.validate_exchange());
    }

    #[test]
    fn isomorphism_is_symmetric_and_transitive(m in arb_matroid(7), p in arb_perm(7), q in arb_perm(7)) {
        let p: Vec<usize> = p.into_iter().filter(|&x| x < m.n()).collect();
        let q: Vec<usize> = q.into_iter().filter(|&x| x < m.n()).collect();
        let a = m.relabel(&p);
        let b = a.relabel(&q);
        prop_assert!(a.is_isomorphic(&m) && m.is_isomorphic(&a));
        prop_assert!(b.is_isomorphic(&m));
    }

    #[test]
    fn relaxation_adds_exactly_one_basis(m in arb_matroid(8)) {
        for ch in m.circuit_hyperplanes() {
            let x = m.relax(ch).unwrap();
            prop_assert_eq!(x.basis_count(), m.basis_count() + 1);
            prop_assert!(x.validate_exchange());
            prop_assert!(x.is_basis(ch));
        }
    }

    #[test]
    fn delta_y_round_trip(m in arb_matroid(8)) {
        for t in m.coindependent_triangles() {
            let y = delta_y(&m, t).unwrap();
            prop_assert!(y.validate_exchange());
            prop_assert_eq!(y.rank(), m.rank() + 1);
            prop_assert!(y.independent_triads().contains(&t));
            prop_assert!(wye_delta(&y, t).unwrap().is_isomorphic(&m));
        }
    }

    #[test]
    fn cached_minor_check_matches_naive(m in arb_matroid(8), n in arb_matroid(5)) {
        let cache = MinorCache::new();
        prop_assert_eq!(has_minor_iso(&m, &n, &cache), has_minor_iso_naive(&m, &n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn relabelling_preserves_invariants(m in arb_matroid(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let mut p: Vec<usize> = (0..m.n()).collect();
            p.shuffle(&mut rng);
            let x = m.relabel(&p);
            prop_assert_eq!(x.invariant_key(), m.invariant_key());
            let w = m.isomorphism(&x).expect("relabelled copy");
            prop_assert_eq!(m.relabel(&w), x);
        }
    }
}
