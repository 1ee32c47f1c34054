mod common;

use clan::mapclass::MapClass;
use clan::poly::{
    apply_poly_map, bc_transforms, compose_maps, currying_natural, decompose, distributivity, poly_map_between,
    recompose, vertical_from_maps, BcSquare,
};
use clan::{is_pullback, pullback, FinMap, FinObj};
use common::{arb_map, every_map, fiber_size};
use proptest::prelude::*;

fn set(max: usize) -> impl Strategy<Value = FinObj> {
    (0..=max).prop_map(FinObj::canonical)
}

proptest! {
    #[test]
    fn cardinality_law(f in arb_map(4, 4), x in set(4)) {
        let app = apply_poly_map(&f, &x);
        let expected: usize = (0..f.cod().len()).map(|b| x.len().pow(fiber_size(&f, b) as u32)).sum();
        prop_assert_eq!(app.total.len(), expected);
        for p in 0..app.total.len() {
            for &e in app.fiber(app.fst_proj.apply(p)) {
                let q = app.snd_source.index_of(p, e).unwrap();
                prop_assert_eq!(app.snd_proj.apply(q), app.section_at(p, e));
            }
        }
    }

    #[test]
    fn functor_laws(f in arb_map(3, 3), h in arb_map(3, 3), k in proptest::collection::vec(0..3usize, 3)) {
        let k = FinMap::new(h.cod().clone(), FinObj::canonical(3), k[..h.cod().len()].to_vec()).unwrap();
        let at = |x: &FinObj| apply_poly_map(&f, x);
        let (px, py, pz) = (at(h.dom()), at(h.cod()), at(k.cod()));
        let id = poly_map_between(&px, &px, &FinMap::identity(h.dom())).unwrap();
        prop_assert!(id.is_identity());
        let ph = poly_map_between(&px, &py, &h).unwrap();
        let pk = poly_map_between(&py, &pz, &k).unwrap();
        let phk = poly_map_between(&px, &pz, &h.compose(&k).unwrap()).unwrap();
        prop_assert_eq!(ph.compose(&pk).unwrap(), phk);
        prop_assert_eq!(ph.compose(&py.fst_proj).unwrap(), px.fst_proj.clone());
    }

    #[test]
    fn universal_property_roundtrips(f in arb_map(3, 2), x in set(2), gamma in 0..=3usize, seed in proptest::collection::vec(any::<usize>(), 3)) {
        let app = apply_poly_map(&f, &x);
        prop_assume!(!app.total.is_empty() || gamma == 0);
        let t: Vec<usize> = seed[..gamma].iter().map(|s| s % app.total.len().max(1)).collect();
        let t = FinMap::new(FinObj::canonical(gamma), app.total.clone(), t).unwrap();
        let d = decompose(&app, &t).unwrap();
        prop_assert_eq!(d.fst.clone(), t.compose(&app.fst_proj).unwrap());
        prop_assert_eq!(recompose(&app, &d.fst, &d.snd).unwrap(), t);
    }

    #[test]
    fn composite_matches_iterated_application(outer in arb_map(3, 3), inner in arb_map(3, 3), x in set(3)) {
        let comp = compose_maps(&outer, &inner).unwrap();
        let curry = comp.currying(&x).unwrap();
        let nested = apply_poly_map(&inner, &apply_poly_map(&outer, &x).total);
        prop_assert_eq!(curry.lhs.total.len(), nested.total.len());
        prop_assert!(curry.iso.is_bijective());
        for c in 0..comp.comp_dom.len() {
            let (p, e, e2) = comp.decode(c);
            prop_assert_eq!(comp.encode(p, e, e2), Some(c));
        }
    }

    #[test]
    fn currying_is_natural(outer in arb_map(2, 2), inner in arb_map(2, 2), h in arb_map(2, 3)) {
        let comp = compose_maps(&outer, &inner).unwrap();
        prop_assert!(currying_natural(&comp, &h).unwrap());
    }
}

/// fst(t ≫ v_X) = fst(t) and snd(t ≫ v_X) = (fst(t) ×_B ρ) ≫ snd(t), by brute force over all t.
#[test]
fn vertical_computation_laws() {
    let b = FinObj::canonical(2);
    for e_prime in (0..=2).map(FinObj::canonical) {
        for f_prime in every_map(&e_prime, &b) {
            for e in (0..=2).map(FinObj::canonical) {
                for rho in every_map(&e, &e_prime) {
                    let f = rho.compose(&f_prime).unwrap();
                    let v = vertical_from_maps(&rho, &f, &f_prime).unwrap();
                    for x in (0..=2).map(FinObj::canonical) {
                        let (from, to, vx) = v.component(&x);
                        for gamma in (0..=2).map(FinObj::canonical) {
                            for t in every_map(&gamma, &from.total) {
                                let tv = t.compose(&vx).unwrap();
                                let d = decompose(&from, &t).unwrap();
                                let dv = decompose(&to, &tv).unwrap();
                                assert_eq!(dv.fst, d.fst);
                                for q in 0..dv.snd_source.apex.len() {
                                    let (g, ei) = dv.snd_source.pairs()[q];
                                    let src = d.snd_source.index_of(g, rho.apply(ei)).unwrap();
                                    assert_eq!(dv.snd.apply(q), d.snd.apply(src));
                                }
                            }
                        }
                        for y in (0..=2).map(FinObj::canonical) {
                            for h in every_map(&x, &y) {
                                let (from_y, to_y, vy) = v.component(&y);
                                let left = vx.compose(&poly_map_between(&to, &to_y, &h).unwrap()).unwrap();
                                let right = poly_map_between(&from, &from_y, &h).unwrap().compose(&vy).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn vertical_requires_a_triangle() {
    let f = FinMap::new(FinObj::canonical(1), FinObj::canonical(2), vec![0]).unwrap();
    let f_prime = FinMap::new(FinObj::canonical(1), FinObj::canonical(2), vec![1]).unwrap();
    let rho = FinMap::identity(&FinObj::canonical(1));
    assert!(vertical_from_maps(&rho, &f, &f_prime).is_err());
}

/// Commuting squares φ ≫ f' = f ≫ δ with all objects of size ≤ 2.
fn commuting_squares() -> Vec<BcSquare> {
    let objs: Vec<FinObj> = (0..=2).map(FinObj::canonical).collect();
    let mut out = Vec::new();
    for b2 in &objs[1..] {
        for e2 in &objs {
            for f_prime in every_map(e2, b2) {
                for b in &objs[1..] {
                    for delta in every_map(b, b2) {
                        for e in &objs {
                            for f in every_map(e, b) {
                                for phi in every_map(e, e2) {
                                    if phi.compose(&f_prime).unwrap() == f.compose(&delta).unwrap() {
                                        out.push(BcSquare { phi, f: f.clone(), f_prime: f_prime.clone(), delta: delta.clone() });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn beck_chevalley_on_pullbacks() {
    let all = MapClass::all();
    let mut pullbacks = 0;
    let mut detected = 0;
    for sq in commuting_squares() {
        let report = bc_transforms(&sq, &all, 2).unwrap();
        if report.is_pullback {
            pullbacks += 1;
            assert!(report.iso_verdict, "{sq:?}");
        } else if !report.iso_verdict {
            detected += 1;
        }
    }
    assert!(pullbacks >= 50);
    assert!(detected >= 10);
}

#[test]
fn chosen_pullback_squares_have_iso_components() {
    let f_prime = FinMap::new(FinObj::canonical(3), FinObj::canonical(2), vec![0, 1, 1]).unwrap();
    let delta = FinMap::new(FinObj::canonical(3), FinObj::canonical(2), vec![1, 1, 0]).unwrap();
    let pb = pullback(&delta, &f_prime).unwrap();
    let sq = BcSquare { phi: pb.proj2.clone(), f: pb.proj1.clone(), f_prime, delta };
    assert!(is_pullback(&sq.as_square().unwrap()).unwrap());
    assert!(bc_transforms(&sq, &MapClass::all(), 3).unwrap().iso_verdict);
}

#[test]
fn distributivity_components_are_isomorphisms() {
    let all = MapClass::all();
    let objs: Vec<FinObj> = (0..=2).map(FinObj::canonical).collect();
    for x in &objs[1..] {
        for y in &objs {
            for f in every_map(y, x) {
                for z in &objs {
                    for g in every_map(z, y) {
                        let w = distributivity(&f, &g, &all, 2).unwrap();
                        assert!(!w.iso_components.is_empty());
                        for (_, iso) in &w.iso_components {
                            assert!(iso.is_bijective());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn pushforward_stability_for_monos() {
    let monos = MapClass::monos();
    let objs: Vec<FinObj> = (0..=2).map(FinObj::canonical).collect();
    for x in &objs[1..] {
        for y in &objs {
            for f in every_map(y, x).into_iter().filter(|f| monos.contains(f)) {
                for z in &objs {
                    for g in every_map(z, y).into_iter().filter(|g| monos.contains(g)) {
                        let w = distributivity(&f, &g, &monos, 2).unwrap();
                        for wobj in &objs {
                            for h in every_map(wobj, z) {
                                let (a, b) = w.pushforward_stability_check(&h, &monos).unwrap();
                                assert_eq!(a, b);
                            }
                        }
                    }
                }
            }
        }
    }
}
