//! Definitional equalities hold on denotations: β and η for functions and pairs.

use mltt::{denote, Model};
use proptest::prelude::*;
use std::sync::LazyLock;

static CARD: LazyLock<Model> = LazyLock::new(|| Model::cardinality(16));

const SCOPE: &str = "[a : Code 2, b : Code 2]";

/// Terms of type Code 2 over a, b and one bound variable x.
#[derive(Clone, Debug)]
enum Bit {
    Var(&'static str),
    Fst(Box<Pair>),
    Snd(Box<Pair>),
    Apply(Box<Bit>, Box<Bit>),
}

/// Terms of type Code 2 * Code 2.
#[derive(Clone, Debug)]
enum Pair {
    Make(Bit, Bit),
    Swap(Box<Pair>),
}

impl Bit {
    /// The source form with x replaced by `x`.
    fn show(&self, x: &str) -> String {
        match self {
            Bit::Var("x") => x.to_string(),
            Bit::Var(v) => v.to_string(),
            Bit::Fst(p) => format!("({}).1", p.show(x)),
            Bit::Snd(p) => format!("({}).2", p.show(x)),
            Bit::Apply(body, arg) => {
                format!("((fun y => {} : Code 2 -> Code 2) {})", body.show("y"), arg.show(x))
            }
        }
    }
}

impl Pair {
    fn show(&self, x: &str) -> String {
        match self {
            Pair::Make(l, r) => format!("(<{}, {}> : Code 2 * Code 2)", l.show(x), r.show(x)),
            Pair::Swap(p) => format!("(<({0}).2, ({0}).1> : Code 2 * Code 2)", p.show(x)),
        }
    }
}

fn bit() -> impl Strategy<Value = Bit> {
    let leaf = prop_oneof![Just(Bit::Var("a")), Just(Bit::Var("b")), Just(Bit::Var("x"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let pair = (inner.clone(), inner.clone()).prop_map(|(l, r)| Pair::Make(l, r));
        let pair = prop_oneof![pair.clone(), pair.prop_map(|p| Pair::Swap(Box::new(p)))];
        prop_oneof![
            pair.clone().prop_map(|p| Bit::Fst(Box::new(p))),
            pair.prop_map(|p| Bit::Snd(Box::new(p))),
            (inner.clone(), inner).prop_map(|(f, g)| Bit::Apply(Box::new(f), Box::new(g))),
        ]
    })
}

fn den(term: &str) -> clan::FinMap {
    denote(&CARD, &format!("eval {SCOPE} {term} : Code 2")).unwrap_or_else(|e| panic!("{term}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_reduction_preserves_denotation(body in bit(), arg in bit()) {
        let arg_src = arg.show("a");
        let redex = format!("(fun x => {} : Code 2 -> Code 2) {arg_src}", body.show("x"));
        let reduct = body.show(&arg_src);
        prop_assert_eq!(den(&redex), den(&reduct));
    }

    #[test]
    fn pair_projections_compute(l in bit(), r in bit()) {
        let pair = Pair::Make(l.clone(), r.clone()).show("b");
        prop_assert_eq!(den(&format!("({pair}).1")), den(&l.show("b")));
        prop_assert_eq!(den(&format!("({pair}).2")), den(&r.show("b")));
    }
}

#[test]
fn function_eta() {
    let scope = "[f : Code 2 -> Code 2, a : Code 2]";
    let eta = denote(&CARD, &format!("eval {scope} (fun x => f x : Code 2 -> Code 2)")).unwrap();
    let f = denote(&CARD, &format!("eval {scope} f")).unwrap();
    assert_eq!(eta, f);
}

#[test]
fn pair_eta() {
    let scope = "[p : Code 2 * Code 2]";
    let eta = denote(&CARD, &format!("eval {scope} <p.1, p.2> : Code 2 * Code 2")).unwrap();
    let p = denote(&CARD, &format!("eval {scope} p")).unwrap();
    assert_eq!(eta, p);
}

#[test]
fn j_computes_on_refl() {
    let scope = "[x : Code 3, u : Code 2]";
    let j = denote(&CARD, &format!("eval {scope} J (z q. Code 2) u x (refl x)")).unwrap();
    let u = denote(&CARD, &format!("eval {scope} u")).unwrap();
    assert_eq!(j, u);
}
