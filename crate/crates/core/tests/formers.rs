mod common;

use clan::algebraic::{fiber_counts, self_composite, AlgUniverse, PolyShape};
use clan::elementary::{
    check_all, check_elem_pi, check_elem_sigma, heterogeneous_pi_sigma, mutate_constant_lam, mutate_swap_projections,
    propositional_elementary,
};
use clan::enumerate::{all_maps, objects_upto};
use clan::translate::{roundtrip, translate, Direction, Former};
use clan::universe::{build_cardinality_universe, build_propositional_universe, build_tower, lift_commutation};
use clan::is_pullback;
use common::fiber_size;

/// Γ.A is the pullback of tp along A, with one element per (γ, term of A γ).
#[test]
fn context_extension_is_a_pullback() {
    let u = build_cardinality_universe(3);
    for gamma in objects_upto(2) {
        for a in all_maps(&gamma, u.ty()) {
            let ext = u.context_extend(&a).unwrap();
            assert!(is_pullback(&ext.square()).unwrap());
            let expected: usize = (0..gamma.len()).map(|g| fiber_size(u.tp(), a.apply(g))).sum();
            assert_eq!(ext.ext().len(), expected);
            assert_eq!(ext.var_map().compose(u.tp()).unwrap(), ext.display().compose(&a).unwrap());
        }
    }
}

#[test]
fn propositional_suites_pass() {
    for report in check_all(&propositional_elementary(), 2) {
        assert!(report.all_pass(), "{}: {:?}", report.subject, report.verdicts.iter().find(|v| !v.pass));
    }
}

#[test]
fn tower_suites_pass_and_sentinels_fail() {
    let tower = build_tower(&[2, 4]).unwrap();
    let (pi, sigma) = heterogeneous_pi_sigma(&tower, 0, 1).unwrap();
    assert!(check_elem_pi(&pi, 2).all_pass());
    assert!(check_elem_sigma(&sigma, 2).all_pass());
    assert!(!check_elem_pi(&mutate_constant_lam(&pi), 2).all_pass());
    assert!(!check_elem_sigma(&mutate_swap_projections(&sigma), 2).all_pass());
    assert!(heterogeneous_pi_sigma(&build_tower(&[3, 4]).unwrap(), 0, 1).is_err());
}

#[test]
fn tower_lifts_commute_with_extension() {
    let tower = build_tower(&[1, 2, 4]).unwrap();
    assert_eq!(tower.lifts.len(), 2);
    for lift in &tower.lifts {
        assert!(lift_commutation(&lift.morphism, 2).unwrap().pass);
        assert!(lift.classifier_comparison().unwrap().is_bijective());
    }
    assert!(build_tower(&[2, 2]).is_err());
}

#[test]
fn propositional_polynomial_shapes() {
    let u = build_propositional_universe();
    let shape = PolyShape::new(&u);
    assert_eq!(shape.ty_app.total.len(), 3);
    assert_eq!(shape.tm_app.total.len(), 2);
    assert_eq!(self_composite(&u).comp_dom.len(), 1);
    assert_eq!(fiber_counts(u.tp()), vec![1, 0]);
}

#[test]
fn translations_pass_on_propositions() {
    let elem = propositional_elementary();
    let u = build_propositional_universe();
    let au = AlgUniverse::new(u.clone(), u.principal_class()).unwrap();
    for former in [Former::Unit, Former::Pi, Former::Sigma, Former::Id] {
        for direction in [Direction::ElemToAlg, Direction::AlgToElem] {
            let report = translate(direction, former, &elem, &au, 2).unwrap();
            assert!(report.pass(), "{direction:?} {former}");
        }
        assert!(roundtrip(former, &elem, &au, 2).unwrap().all_pass(), "{former}");
    }
}

#[test]
fn non_class_universe_is_rejected() {
    let u = build_cardinality_universe(2);
    let monos = clan::mapclass::MapClass::monos();
    assert!(AlgUniverse::new(u, monos).is_err());
}
