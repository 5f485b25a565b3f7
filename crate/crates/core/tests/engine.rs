use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;

use minorforge::engine::*;
use minorforge::linrep::{ExtensionContext, ExtensionMode, LinearRep};
use minorforge::matroid::{catalog, has_minor_iso, BasisMatroid, MinorCache};
use minorforge::FieldSpec;
use rand::seq::SliceRandom;
use rand::SeedableRng;

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

/// Dyadic and 2-regular levels up to n = 10, generated once per test binary.
fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        for name in BUILTIN_CLASSES {
            let class = ClassSpec::builtin(name).unwrap();
            let store = LevelStore::open(&root, name).unwrap();
            for n in class.n0()..=10 {
                generate_level(&class, n, &store, &EngineConfig::default()).unwrap();
            }
        }
        Fixture { _dir: dir, root }
    })
}

fn open(name: &str) -> (ClassSpec, LevelStore) {
    let class = ClassSpec::builtin(name).unwrap();
    let store = LevelStore::open(&fixture().root, name).unwrap();
    (class, store)
}

fn counts(store: &LevelStore, class: &str, n: usize) -> BTreeMap<usize, usize> {
    store.read_counts(class, n).unwrap()
}

#[test]
fn small_level_counts() {
    let (_, d) = open("dyadic");
    assert_eq!(counts(&d, "dyadic", 7), BTreeMap::from([(3, 1), (4, 1)]));
    assert_eq!(counts(&d, "dyadic", 8), BTreeMap::from([(3, 1), (4, 7), (5, 1)]));
    assert_eq!(counts(&d, "dyadic", 9), BTreeMap::from([(3, 1), (4, 24), (5, 24), (6, 1)]));
    assert_eq!(counts(&d, "dyadic", 10), BTreeMap::from([(4, 52), (5, 223), (6, 52)]));
    let (_, t) = open("2regular");
    assert_eq!(counts(&t, "2regular", 5), BTreeMap::from([(2, 1), (3, 1)]));
    assert_eq!(counts(&t, "2regular", 6), BTreeMap::from([(3, 1)]));
    assert_eq!(counts(&t, "2regular", 8), BTreeMap::from([(3, 4), (4, 17), (5, 4)]));
    assert_eq!(counts(&t, "2regular", 10).values().sum::<usize>(), 732);
    assert_eq!(counts(&t, "2regular", 10)[&3], 2);
    let tsv = counts_tsv(&counts_report("2regular", &t).unwrap());
    assert!(tsv.lines().last().unwrap().starts_with("total\t2\t1\t4\t25\t130\t732"));
}

#[test]
fn members_satisfy_class_invariants() {
    for name in BUILTIN_CLASSES {
        let (class, store) = open(name);
        let seeds: Vec<BasisMatroid> = class.seeds.iter().map(|s| s.record.matroid.clone()).collect();
        let cache = MinorCache::new();
        for n in class.n0()..=9 {
            let level = store.read_level(name, n).unwrap();
            let index = IsoIndex::new(level.iter().map(|r| &r.matroid));
            for (i, r) in level.iter().enumerate() {
                r.check().unwrap();
                assert!(r.matroid.is_3connected(), "{name} n={n}");
                assert!(index.contains(&r.matroid.dual()), "{name} n={n}: not closed under duality");
                assert!(minorforge::linrep::is_confined(&r.confined, class.proxy.allowed_table()));
                if i % 7 == 0 {
                    assert!(seeds.iter().any(|s| has_minor_iso(&r.matroid, s, &cache)), "{name} n={n}: no seed minor");
                }
            }
        }
    }
}

#[test]
fn filter_keeps_one_copy_of_relabelled_matroids() {
    let f7 = catalog::get("F7").unwrap();
    let copy = f7.relabel(&[3, 1, 4, 0, 6, 5, 2]);
    assert_ne!(copy, f7);
    let out = isomorph_filter_in_memory(vec![f7.clone(), copy.clone()]);
    assert_eq!(out.len(), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = isomorph_filter(vec![copy, f7], dir.path().join("g"), FilterConfig { groups: 3, batch_size: 1 }).unwrap();
    assert_eq!(out.len(), 1);
}

#[test]
fn filter_is_deterministic() {
    let (class, store) = open("dyadic");
    let parents = store.read_level("dyadic", 8).unwrap();
    let mut raw = Vec::new();
    for p in &parents {
        for r in member_extensions(&class, p, ExtensionMode::Exact).unwrap() {
            raw.push(r.dual());
            raw.push(r);
        }
    }
    let expected: Vec<String> = store.read_level("dyadic", 9).unwrap().iter().map(|r| r.serialize()).collect();
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (k, (groups, batch)) in [(1, 100_000), (7, 13), (127, 1), (3, 500)].into_iter().enumerate() {
        let mut input = raw.clone();
        input.shuffle(&mut rng);
        // Seeds of size 9: none for the dyadic class.
        let out = isomorph_filter(input.clone(), dir.path().join(k.to_string()), FilterConfig { groups, batch_size: batch })
            .unwrap();
        let got: Vec<String> = out.iter().map(|r| r.serialize()).collect();
        assert_eq!(got, expected, "g={groups} batch={batch}");
        let mem: Vec<String> = isomorph_filter_in_memory(input).iter().map(|r| r.serialize()).collect();
        assert_eq!(mem, expected);
    }
}

#[test]
fn regeneration_is_byte_identical() {
    let (class, store) = open("2regular");
    let dir = tempfile::tempdir().unwrap();
    let other = LevelStore::open(dir.path(), "2regular").unwrap();
    let cfg = EngineConfig { filter: FilterConfig { groups: 5, batch_size: 17 }, ..Default::default() };
    for n in class.n0()..=9 {
        generate_level(&class, n, &other, &cfg).unwrap();
        let a = std::fs::read(store.level_dir(n).join("members.txt")).unwrap();
        let b = std::fs::read(other.level_dir(n).join("members.txt")).unwrap();
        assert!(a == b, "n={n}");
    }
}

#[test]
fn fast_confinement_matches_exact_on_generated_instances() {
    for name in BUILTIN_CLASSES {
        let (class, store) = open(name);
        for n in class.n0()..=8 {
            for r in store.read_level(name, n).unwrap() {
                let ctx = ExtensionContext::new(&r.confined, Some(class.proxy.allowed_table()));
                let exact = ctx.confined_simple_extensions(ExtensionMode::Exact);
                let fast = ctx.confined_simple_extensions(ExtensionMode::Fast);
                assert_eq!(fast, exact, "{name} n={n}");
            }
        }
    }
}

/// Candidates M such that M or M* has a pair {x, y} with M\x, M\y at level
/// n - 1 and M\x\y at level n - 2.
fn pair_deletable(cands: &[BasisMatroid], upper: &IsoIndex, lower: &IsoIndex) -> Vec<BasisMatroid> {
    let has_pair = |m: &BasisMatroid| {
        let n = m.n();
        (0..n).any(|x| {
            let mx = m.delete(x);
            upper.contains(&mx)
                && (x + 1..n).any(|y| upper.contains(&m.delete(y)) && lower.contains(&mx.delete(y - 1)))
        })
    };
    cands.iter().filter(|m| has_pair(m) || has_pair(&m.dual())).cloned().collect()
}

fn same_classes(a: &[BasisMatroid], b: &[BasisMatroid]) -> bool {
    let ia = IsoIndex::new(a.iter());
    let ib = IsoIndex::new(b.iter());
    a.len() == b.len() && a.iter().all(|m| ib.contains(m)) && b.iter().all(|m| ia.contains(m))
}

#[test]
fn splices_equal_pair_deletable_extensions() {
    let cfg = EngineConfig::default();
    for (name, sizes) in [("dyadic", 9..=10), ("2regular", 7..=10)] {
        let (class, store) = open(name);
        let class = ClassSpec { carrier_threshold: 0, ..class };
        for n in sizes {
            let cands = extension_candidates(&class, n, &store, &cfg).unwrap();
            let spl = splice_candidates(&class, n, &store, &cfg).unwrap();
            let upper_level = store.read_level(name, n - 1).unwrap();
            let lower_level = store.read_level(name, n - 2).unwrap();
            let upper = IsoIndex::new(upper_level.iter().map(|r| &r.matroid));
            let lower = IsoIndex::new(lower_level.iter().map(|r| &r.matroid));
            let oracle = pair_deletable(&cands, &upper, &lower);
            assert!(same_classes(&spl, &oracle), "{name} n={n}: {} splices, {} oracle", spl.len(), oracle.len());
        }
    }
}

#[test]
fn extension_candidates_contain_members() {
    let cfg = EngineConfig::default();
    for name in BUILTIN_CLASSES {
        let (class, store) = open(name);
        let class = ClassSpec { carrier_threshold: 0, ..class };
        for n in class.n0() + 1..=10 {
            let cands = extension_candidates(&class, n, &store, &cfg).unwrap();
            let index = IsoIndex::new(cands.iter());
            // Seeds enter at their own size and need not extend anything.
            let seeds = IsoIndex::new(class.seeds.iter().map(|s| &s.record.matroid));
            for r in store.read_level(name, n).unwrap() {
                assert!(index.contains(&r.matroid) || seeds.contains(&r.matroid), "{name} n={n}");
            }
        }
    }
    let (class, store) = open("dyadic");
    let cands = extension_candidates(&class, 8, &store, &cfg).unwrap();
    let t8 = catalog::get("T8").unwrap();
    assert!(cands.iter().any(|m| m.is_isomorphic(&t8)));
    assert!(extension_candidates(&class, 7, &store, &cfg).is_err());
}

#[test]
fn splicing_uniform_lines() {
    // Over GF(5) the line U2,4 has two further points, each giving U2,5.
    let f5 = FieldSpec::new(5).unwrap();
    let u24 = LinearRep::from_rows(f5.clone(), &[vec![1, 1], vec![1, 2]]).unwrap();
    let rec = MemberRecord::new(u24.matroid(), u24.clone(), u24);
    let u25 = BasisMatroid::uniform(2, 5);
    let index = IsoIndex::new([&u25]);
    let out = splices_of(&rec, &index);
    assert_eq!(out.len(), 1);
    assert!(out[0].is_isomorphic(&BasisMatroid::uniform(2, 6)));
    for m in &out {
        assert!(index.contains(&m.delete(4)) && index.contains(&m.delete(5)));
    }
}

#[test]
fn sieve_small_dyadic_sizes() {
    let (class, store) = open("dyadic");
    let cfg = EngineConfig::default();
    let cache = MinorCache::new();
    let mut known: Vec<BasisMatroid> = class.base_excluded_matroids().unwrap().into_iter().map(|x| x.1).collect();
    let c8 = extension_candidates(&class, 8, &store, &cfg).unwrap();
    let x8 = sieve_excluded(&class, 8, &c8, &known, &store, &cache).unwrap();
    assert_eq!(x8.len(), 1);
    assert!(x8[0].is_isomorphic(&catalog::get("T8").unwrap()));
    assert_eq!(delta_dual_closure(&x8).len(), 1);
    known.extend(x8);
    let c9 = extension_candidates(&class, 9, &store, &cfg).unwrap();
    assert!(sieve_excluded(&class, 9, &c9, &known, &store, &cache).unwrap().is_empty());
}

#[test]
fn base_lists_verify() {
    for name in BUILTIN_CLASSES {
        let class = ClassSpec::builtin(name).unwrap();
        for b in verify_base_excluded(&class).unwrap() {
            assert!(b.passed(), "{name}: {b:?}");
        }
    }
    let two = ClassSpec::builtin("2regular").unwrap();
    for name in ["F7=", "P8-"] {
        assert!(!is_member(&two, &catalog::get(name).unwrap()));
    }
    assert!(is_member(&two, &catalog::get("U2,5").unwrap()));
}

#[test]
fn circuit_hyperplane_hunt_finds_t8() {
    let (class, store) = open("dyadic");
    let known: Vec<BasisMatroid> = class.base_excluded_matroids().unwrap().into_iter().map(|x| x.1).collect();
    let report = ch_hunt(&class, 7, &known, &store, &MinorCache::new()).unwrap();
    assert!(report.selected > 0);
    let t8 = catalog::get("T8").unwrap();
    assert_eq!(report.survivors.len(), 1);
    assert!(report.survivors[0].is_isomorphic(&t8));
    for m in &report.survivors {
        let ch = m.circuit_hyperplanes();
        assert!(ch.iter().any(|&a| ch.iter().any(|&b| a & b == 0)));
    }
}

#[test]
fn excluded_below_seed_size_is_base_only() {
    let dir = tempfile::tempdir().unwrap();
    let class = ClassSpec::builtin("dyadic").unwrap();
    let store = LevelStore::open(dir.path(), "dyadic").unwrap();
    let report = excluded_minors(&class, 6, &store, &EngineConfig::default()).unwrap();
    assert!(report.base_ok());
    assert!(report.sieved.is_empty());
}

#[test]
fn missing_levels_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let class = ClassSpec::builtin("dyadic").unwrap();
    let store = LevelStore::open(dir.path(), "dyadic").unwrap();
    let err = generate_level(&class, 9, &store, &EngineConfig::default()).unwrap_err();
    assert!(matches!(err, minorforge::Error::MissingLevel { level: 8, .. }));
}
