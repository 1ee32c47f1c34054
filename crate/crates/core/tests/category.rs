mod common;

use clan::{is_pullback, pullback, pushforward, FinMap, FinObj, Square};
use common::{arb_map, every_map, fiber_size};
use proptest::prelude::*;

fn table(dom: usize, cod: usize) -> impl Strategy<Value = FinMap> {
    let cod_len = if dom == 0 { cod } else { cod.max(1) };
    proptest::collection::vec(0..cod_len.max(1), dom)
        .prop_map(move |t| FinMap::new(FinObj::canonical(dom), FinObj::canonical(cod_len), t).unwrap())
}

/// Maps A → B → C → D between sets of size ≤ 4.
fn composable_triple() -> impl Strategy<Value = (FinMap, FinMap, FinMap)> {
    (0..=4usize, 1..=4usize, 1..=4usize, 1..=4usize)
        .prop_flat_map(|(a, b, c, d)| (table(a, b), table(b, c), table(c, d)))
}

proptest! {
    #[test]
    fn composition_is_associative_and_unital((f, g, h) in composable_triple()) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(FinMap::identity(f.dom()).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&FinMap::identity(f.cod())).unwrap(), f);
    }

    #[test]
    fn pullback_apex_is_the_set_of_matching_pairs(f in arb_map(5, 3), t in proptest::collection::vec(0..3usize, 0..5)) {
        let cod = f.cod().clone();
        let t: Vec<usize> = t.into_iter().map(|i| i % cod.len()).collect();
        let g = FinMap::new(FinObj::canonical(t.len()), cod, t).unwrap();
        let pb = pullback(&f, &g).unwrap();
        let mut pairs = Vec::new();
        for x in 0..f.dom().len() {
            for y in 0..g.dom().len() {
                if f.apply(x) == g.apply(y) {
                    pairs.push((x, y));
                }
            }
        }
        prop_assert_eq!(pb.pairs(), pairs.as_slice());
        prop_assert!(is_pullback(&pb.square()).unwrap());
    }

    #[test]
    fn pushforward_fibers_count_sections(f in arb_map(3, 3), t in proptest::collection::vec(0..3usize, 0..5)) {
        let e = f.dom().clone();
        prop_assume!(!e.is_empty() || t.is_empty());
        let t: Vec<usize> = t.into_iter().map(|i| i % e.len().max(1)).collect();
        let t = if e.is_empty() { vec![] } else { t };
        let g = FinMap::new(FinObj::canonical(t.len()), e.clone(), t).unwrap();
        let pf = pushforward(&f, &g).unwrap();
        for b in 0..f.cod().len() {
            let expected: usize = (0..e.len()).filter(|&x| f.apply(x) == b).map(|x| fiber_size(&g, x)).product();
            prop_assert_eq!(fiber_size(&pf.map, b), expected);
        }
    }
}

/// Every cone over the cospan factors through the chosen pullback exactly once.
#[test]
fn pullback_universal_property_small() {
    let objects: Vec<FinObj> = (0..=2).map(FinObj::canonical).collect();
    for z in &objects[1..] {
        for x in &objects {
            for y in &objects {
                for f in every_map(x, z) {
                    for g in every_map(y, z) {
                        let pb = pullback(&f, &g).unwrap();
                        for w in &objects {
                            for a in every_map(w, x) {
                                for b in every_map(w, y) {
                                    let commutes = a.compose(&f).unwrap() == b.compose(&g).unwrap();
                                    let count = every_map(w, &pb.apex)
                                        .into_iter()
                                        .filter(|m| m.compose(&pb.proj1).unwrap() == a && m.compose(&pb.proj2).unwrap() == b)
                                        .count();
                                    assert_eq!(count, usize::from(commutes));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn is_pullback_rejects_shrunk_and_duplicated_corners() {
    let f = FinMap::new(FinObj::canonical(3), FinObj::canonical(2), vec![0, 0, 1]).unwrap();
    let g = FinMap::new(FinObj::canonical(1), FinObj::canonical(2), vec![0]).unwrap();
    let pb = pullback(&f, &g).unwrap();
    assert_eq!(pb.apex.len(), 2);
    let sub = FinMap::new(FinObj::canonical(1), pb.apex.clone(), vec![1]).unwrap();
    let shrunk = Square::new(sub.compose(&pb.proj1).unwrap(), sub.compose(&pb.proj2).unwrap(), f.clone(), g.clone()).unwrap();
    assert!(!is_pullback(&shrunk).unwrap());
    let dup = FinMap::new(FinObj::canonical(3), pb.apex.clone(), vec![0, 1, 1]).unwrap();
    let duplicated = Square::new(dup.compose(&pb.proj1).unwrap(), dup.compose(&pb.proj2).unwrap(), f, g).unwrap();
    assert!(!is_pullback(&duplicated).unwrap());
}

/// Hom_B(σ, f_* g) and Hom_E(f^* σ, g) have equal size and transposition is a bijection between them.
#[test]
fn pushforward_adjunction_small() {
    let objects: Vec<FinObj> = (0..=2).map(FinObj::canonical).collect();
    for b_obj in &objects[1..] {
        for e_obj in &objects {
            for f in every_map(e_obj, b_obj) {
                for z in &objects {
                    for g in every_map(z, e_obj) {
                        let pf = pushforward(&f, &g).unwrap();
                        for s in &objects {
                            for sigma in every_map(s, b_obj) {
                                let over_b: Vec<FinMap> = every_map(s, &pf.total)
                                    .into_iter()
                                    .filter(|h| h.compose(&pf.map).unwrap() == sigma)
                                    .collect();
                                let pb = pullback(&f, &sigma).unwrap();
                                let over_e: Vec<FinMap> = every_map(&pb.apex, z)
                                    .into_iter()
                                    .filter(|k| k.compose(&g).unwrap() == pb.proj1)
                                    .collect();
                                assert_eq!(over_b.len(), over_e.len());
                                for h in &over_b {
                                    let (pb2, k) = pf.transpose(h).unwrap();
                                    assert!(over_e.contains(&k));
                                    assert_eq!(&pf.untranspose(&pb2, &k).unwrap(), h);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn json_roundtrip(f in arb_map(4, 4)) {
        prop_assert_eq!(FinMap::from_json(&f.to_json()).unwrap(), f);
    }
}
