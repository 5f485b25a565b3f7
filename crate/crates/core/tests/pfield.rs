use minorforge::field::{primes_between, FieldSpec};
use minorforge::pfield::{builtin, field_associates, find_proxy, verify_proxy, BUILTIN_NAMES};

#[test]
fn smallest_proxies() {
    let expected: [(&str, u32, &[u32]); 5] =
        [("S", 7, &[3]), ("D", 11, &[2]), ("U1", 23, &[5]), ("K2", 73, &[15]), ("U2", 211, &[4, 44])];
    for (name, q, images) in expected {
        let pf = builtin(name).unwrap();
        let fund = pf.fundamentals(3);
        let p = find_proxy(&pf, &fund, 1000).unwrap();
        assert_eq!(p.field.order(), q, "{name}");
        assert_eq!(p.images, images, "{name}");
        assert_eq!(p.f.len(), fund.len() - 2, "{name}");
    }
}

#[test]
fn every_smaller_prime_fails() {
    for name in ["D", "U1", "K2"] {
        let pf = builtin(name).unwrap();
        let fund = pf.fundamentals(3);
        let found = find_proxy(&pf, &fund, 1000).unwrap();
        for p in primes_between(2, found.field.order() - 1) {
            let field = FieldSpec::new(p).unwrap();
            let tuples: Vec<Vec<u32>> = if name == "D" {
                vec![vec![field.from_int(2)]]
            } else {
                (1..p).map(|x| vec![x]).collect()
            };
            for t in tuples {
                assert!(verify_proxy(&pf, &fund, &field, &t).is_err(), "{name} GF({p}) {t:?}");
            }
        }
    }
}

#[test]
fn confinement_sets_are_closed_under_associates() {
    for name in ["S", "D", "U1", "K2", "U2"] {
        let pf = builtin(name).unwrap();
        let fund = pf.fundamentals(3);
        let p = find_proxy(&pf, &fund, 1000).unwrap();
        for &x in &p.f {
            for a in field_associates(&p.field, x) {
                assert!(p.f.contains(&a), "{name}: {a} associate of {x}");
            }
        }
    }
}

#[test]
fn fundamentals_stable_between_bounds() {
    for name in BUILTIN_NAMES {
        let pf = builtin(name).unwrap();
        let a = pf.fundamentals(3);
        let b = pf.fundamentals(5);
        assert_eq!(a.len(), b.len(), "{name}");
        for e in &a.elements {
            assert!(b.index_of(e).is_some(), "{name}");
        }
    }
}

mod division_oracle {
    use minorforge::pfield::{builtin, GroupElement};
    use proptest::prelude::*;

    fn check(name: &str, sign: i8, exps: Vec<i32>) {
        let pf = builtin(name).unwrap();
        let g = GroupElement { sign, exps: exps.clone() };
        let pos = GroupElement { sign: 1, exps: exps.iter().map(|&e| e.max(0)).collect() };
        let neg = GroupElement { sign: 1, exps: exps.iter().map(|&e| (-e).max(0)).collect() };
        let p = pf.expand(&neg).sub(&pf.expand(&pos).scale(sign as i128));
        let by_division = pf.one_minus(&g);
        if p.is_zero() {
            assert_eq!(by_division, Ok(None));
            return;
        }
        match pf.factor_by_expansion(&p) {
            None => assert_eq!(by_division, Err(())),
            Some((unit, f)) => {
                let expected = GroupElement {
                    sign: unit,
                    exps: f.iter().zip(&neg.exps).map(|(a, b)| a - b).collect(),
                };
                assert_eq!(by_division, Ok(Some(expected)));
                // and the witness really multiplies back
                let back = pf.expand(&GroupElement { sign: unit, exps: f });
                assert_eq!(back, p);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn u2_membership_matches_expansion(sign in prop_oneof![Just(1i8), Just(-1i8)],
                                           exps in proptest::collection::vec(-2i32..=2, 5)) {
            check("U2", sign, exps);
        }

        #[test]
        fn k2_membership_matches_expansion(sign in prop_oneof![Just(1i8), Just(-1i8)],
                                           exps in proptest::collection::vec(-3i32..=3, 3)) {
            check("K2", sign, exps);
        }
    }

    #[test]
    fn known_members() {
        // 1 - alpha lies in the group; 1 - alpha*beta does not
        check("U2", 1, vec![1, 0, 0, 0, 0]);
        check("U2", 1, vec![1, 1, 0, 0, 0]);
        check("K2", -1, vec![0, 1, 0]);
    }
}
