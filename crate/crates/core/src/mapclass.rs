//! Classes of maps with decidable membership, and bounded checks of the
//! preclan, π-preclan and clan axioms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{all_maps, bijections, maps_into, maps_upto, objects_upto, slice_homs};
use crate::error::{Error, Result};
use crate::finset::{bang, is_pullback, pullback, pushforward, FinMap, FinObj, PushforwardResult, Square};
use crate::report::Verdict;

/// Where a class came from.
#[derive(Clone, Debug)]
pub enum Provenance {
    Explicit(Vec<FinMap>),
    AllBelow(usize),
    Principal(FinMap),
    Union(Vec<String>),
    Named(String),
}

type Predicate = Arc<dyn Fn(&FinMap) -> bool + Send + Sync>;

/// A class of maps given by a pure membership predicate.
#[derive(Clone)]
pub struct MapClass {
    name: String,
    provenance: Provenance,
    member: Predicate,
}

impl fmt::Debug for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapClass({})", self.name)
    }
}

impl MapClass {
    pub fn named(name: &str, pred: impl Fn(&FinMap) -> bool + Send + Sync + 'static) -> Self {
        MapClass {
            name: name.to_string(),
            provenance: Provenance::Named(name.to_string()),
            member: Arc::new(pred),
        }
    }

    pub fn all() -> Self {
        MapClass::named("all", |_| true)
    }

    /// Monomorphisms: every fiber has at most one element.
    pub fn monos() -> Self {
        MapClass::named("mono", FinMap::is_injective)
    }

    pub fn surjections() -> Self {
        MapClass::named("surj", FinMap::is_surjective)
    }

    pub fn surjections_minus_identities() -> Self {
        MapClass::named("surj-nonid", |f| f.is_surjective() && !f.is_identity())
    }

    /// Maps all of whose fiber sizes lie in `sizes`.
    pub fn fiber_sizes_in(sizes: &[usize]) -> Self {
        let allowed: BTreeSet<usize> = sizes.iter().copied().collect();
        let name = format!(
            "fibers:{}",
            allowed.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        );
        MapClass::named(&name, move |f| f.fiber_sizes().iter().all(|n| allowed.contains(n)))
    }

    /// Maps whose domain and codomain both have at most `n` elements.
    pub fn all_below(n: usize) -> Self {
        MapClass {
            name: format!("below:{n}"),
            provenance: Provenance::AllBelow(n),
            member: Arc::new(move |f| f.dom().len() <= n && f.cod().len() <= n),
        }
    }

    /// Membership is equality with one of the listed maps.
    pub fn explicit(name: &str, maps: Vec<FinMap>) -> Self {
        let list = maps.clone();
        MapClass {
            name: name.to_string(),
            provenance: Provenance::Explicit(maps),
            member: Arc::new(move |f| list.contains(f)),
        }
    }

    /// Looks up a built-in class by name: `all`, `mono`, `surj`, `surj-nonid`,
    /// `fibers:0,2`, `below:3`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "all" => Some(MapClass::all()),
            "mono" | "monos" => Some(MapClass::monos()),
            "surj" | "surjections" => Some(MapClass::surjections()),
            "surj-nonid" => Some(MapClass::surjections_minus_identities()),
            _ => {
                if let Some(rest) = name.strip_prefix("fibers:") {
                    let sizes = rest
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .ok()?;
                    Some(MapClass::fiber_sizes_in(&sizes))
                } else if let Some(rest) = name.strip_prefix("below:") {
                    rest.parse().ok().map(MapClass::all_below)
                } else {
                    None
                }
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn contains(&self, f: &FinMap) -> bool {
        (self.member)(f)
    }

    /// Object membership: X → ⋆ is in the class.
    pub fn contains_object(&self, x: &FinObj) -> bool {
        self.contains(&bang(x))
    }
}

/// The principal class of `tp`: maps every fiber of which has the size of some fiber of `tp`.
pub fn principal_class(tp: &FinMap) -> MapClass {
    let sizes: BTreeSet<usize> = tp.fiber_sizes().into_iter().collect();
    let shown = sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
    MapClass {
        name: format!("principal[{shown}]"),
        provenance: Provenance::Principal(tp.clone()),
        member: Arc::new(move |f| f.fiber_sizes().iter().all(|n| sizes.contains(n))),
    }
}

pub fn union_class(classes: &[MapClass]) -> MapClass {
    assert!(!classes.is_empty(), "union of no classes");
    let parts = classes.to_vec();
    let names: Vec<String> = classes.iter().map(|c| c.name.clone()).collect();
    MapClass {
        name: names.join("∪"),
        provenance: Provenance::Union(names),
        member: Arc::new(move |f| parts.iter().any(|c| c.contains(f))),
    }
}

pub const ORACLE_BUDGET: u128 = 1_000_000;

/// Searches for a pullback square exhibiting `f` as a pullback of `tp`:
/// a base map A: cod f → Ty and a top map E → Tm over it.
pub fn pullback_square_oracle(f: &FinMap, tp: &FinMap) -> Result<Option<Square>> {
    pullback_square_oracle_with_budget(f, tp, ORACLE_BUDGET)
}

pub fn pullback_square_oracle_with_budget(
    f: &FinMap,
    tp: &FinMap,
    budget: u128,
) -> Result<Option<Square>> {
    let candidates = (tp.cod().len() as u128)
        .checked_pow(f.cod().len() as u32)
        .unwrap_or(u128::MAX);
    if candidates > budget {
        return Err(Error::SearchBudgetExceeded { candidates, limit: budget });
    }
    for base in all_maps(f.cod(), tp.cod()) {
        let over = f.compose(&base)?;
        for top in slice_homs(&over, tp) {
            let sq = Square::new(top, f.clone(), tp.clone(), base.clone())?;
            if is_pullback(&sq)? {
                return Ok(Some(sq));
            }
        }
    }
    Ok(None)
}

/// The outcome of one axiom check.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: u8,
    pub pass: bool,
    pub counterexample: Option<Value>,
    pub bound: usize,
    pub checked: u64,
    /// For axiom 5: sizes n ≤ bound such that {0..n-1} is a class object.
    pub class_objects: Option<Vec<usize>>,
}

impl AxiomReport {
    fn from_verdict(axiom: u8, bound: usize, v: Verdict) -> Self {
        AxiomReport {
            axiom,
            pass: v.pass,
            counterexample: v.counterexample,
            bound,
            checked: v.checked,
            class_objects: None,
        }
    }

    pub fn to_verdict(&self) -> Verdict {
        Verdict {
            id: format!("axiom.{}", self.axiom),
            description: axiom_description(self.axiom).to_string(),
            pass: self.pass,
            counterexample: self.counterexample.clone(),
            checked: self.checked,
        }
    }
}

pub fn axiom_description(axiom: u8) -> &'static str {
    match axiom {
        1 => "pullbacks of class maps along all maps are class maps",
        2 => "every isomorphism is a class map",
        3 => "class maps are closed under composition",
        4 => "class maps are closed under pushforward along class maps",
        5 => "every object is a class object",
        _ => "unknown axiom",
    }
}

/// Runs `check` on every item in parallel and folds the results in input order.
fn fold_ordered<T: Sync>(items: &[T], check: impl Fn(&T) -> Verdict + Sync + Send) -> Verdict {
    let parts: Vec<Verdict> = items.par_iter().map(check).collect();
    let mut total = Verdict::new("", "");
    for p in parts {
        total.merge(p);
    }
    total
}

/// Axioms (1)–(3) over all maps between canonical objects of size ≤ bound.
pub fn check_preclan(class: &MapClass, bound: usize) -> Vec<AxiomReport> {
    vec![check_axiom1(class, bound), check_axiom2(class, bound), check_axiom3(class, bound)]
}

pub fn check_axiom1(class: &MapClass, bound: usize) -> AxiomReport {
    let members: Vec<FinMap> = maps_upto(bound).into_iter().filter(|f| class.contains(f)).collect();
    let v = fold_ordered(&members, |f| {
        let mut v = Verdict::new("", "");
        for g in maps_into(f.cod(), bound) {
            let pb = pullback(f, &g).expect("common codomain");
            v.record(class.contains(&pb.proj2), || {
                json!({ "f": f.to_json(), "g": g.to_json(), "pullback": pb.proj2.to_json() })
            });
        }
        v
    });
    AxiomReport::from_verdict(1, bound, v)
}

pub fn check_axiom2(class: &MapClass, bound: usize) -> AxiomReport {
    let mut v = Verdict::new("", "");
    for obj in objects_upto(bound) {
        for iso in bijections(&obj, &obj) {
            v.record(class.contains(&iso), || json!({ "bijection": iso.to_json() }));
        }
    }
    AxiomReport::from_verdict(2, bound, v)
}

pub fn check_axiom3(class: &MapClass, bound: usize) -> AxiomReport {
    let members: Vec<FinMap> = maps_upto(bound).into_iter().filter(|f| class.contains(f)).collect();
    let v = fold_ordered(&members, |f| {
        let mut v = Verdict::new("", "");
        for g in members.iter().filter(|g| g.dom() == f.cod()) {
            let fg = f.compose(g).expect("composable");
            v.record(class.contains(&fg), || {
                json!({ "f": f.to_json(), "g": g.to_json(), "composite": fg.to_json() })
            });
        }
        v
    });
    AxiomReport::from_verdict(3, bound, v)
}

/// Axiom (4): pushforwards of class maps along class maps stay in the class,
/// and the hom bijection of f^* ⊣ f_* holds against every σ of size ≤ bound.
pub fn check_pi_preclan(class: &MapClass, bound: usize) -> AxiomReport {
    let members: Vec<FinMap> = maps_upto(bound).into_iter().filter(|f| class.contains(f)).collect();
    let v = fold_ordered(&members, |f| {
        let mut v = Verdict::new("", "");
        for g in members.iter().filter(|g| g.cod() == f.dom()) {
            let pf = pushforward(f, g).expect("composable");
            v.record(class.contains(&pf.map), || {
                json!({ "f": f.to_json(), "g": g.to_json(), "pushforward": pf.map.to_json() })
            });
            for sigma in maps_into(f.cod(), bound) {
                let problem = adjunction_failure(&pf, &sigma);
                v.record(problem.is_none(), || {
                    json!({
                        "f": f.to_json(), "g": g.to_json(), "sigma": sigma.to_json(),
                        "adjunction": problem.clone().unwrap_or_default()
                    })
                });
            }
        }
        v
    });
    AxiomReport::from_verdict(4, bound, v)
}

/// Checks |Hom_B(σ, f_* g)| = |Hom_E(f^* σ, g)| and that the two transposes are
/// mutually inverse. Returns a description of the first failure.
pub fn adjunction_failure(pf: &PushforwardResult, sigma: &FinMap) -> Option<String> {
    let pb = pullback(&pf.f, sigma).ok()?;
    let left: Vec<FinMap> = slice_homs(sigma, &pf.map).collect();
    let right: Vec<FinMap> = slice_homs(&pb.proj1, &pf.g).collect();
    if left.len() != right.len() {
        return Some(format!("hom-set sizes {} and {}", left.len(), right.len()));
    }
    for h in &left {
        let Ok((pb2, k)) = pf.transpose(h) else { return Some(format!("transpose failed at {h}")) };
        if k.compose(&pf.g).ok()? != pb2.proj1 {
            return Some(format!("transpose of {h} is not over E"));
        }
        if pf.untranspose(&pb2, &k).ok().as_ref() != Some(h) {
            return Some(format!("untranspose does not invert transpose at {h}"));
        }
    }
    for k in &right {
        let Ok(h) = pf.untranspose(&pb, k) else { return Some(format!("untranspose failed at {k}")) };
        if h.compose(&pf.map).ok()? != *sigma {
            return Some(format!("untranspose of {k} is not over B"));
        }
        match pf.transpose(&h) {
            Ok((_, back)) if back == *k => {}
            _ => return Some(format!("transpose does not invert untranspose at {k}")),
        }
    }
    None
}

/// Axiom (5): X → ⋆ is a class map for all X of size ≤ bound. Also reports
/// which sizes are class objects.
pub fn check_clan(class: &MapClass, bound: usize) -> AxiomReport {
    let mut v = Verdict::new("", "");
    let mut objects = Vec::new();
    for x in objects_upto(bound) {
        let ok = class.contains_object(&x);
        if ok {
            objects.push(x.len());
        }
        v.record(ok, || json!({ "object": x.to_json() }));
    }
    let mut report = AxiomReport::from_verdict(5, bound, v);
    report.class_objects = Some(objects);
    report
}

/// Runs the requested axioms (any of 1–5).
pub fn check_axioms(class: &MapClass, bound: usize, axioms: &[u8]) -> Vec<AxiomReport> {
    axioms
        .iter()
        .map(|&a| match a {
            1 => check_axiom1(class, bound),
            2 => check_axiom2(class, bound),
            3 => check_axiom3(class, bound),
            4 => check_pi_preclan(class, bound),
            _ => check_clan(class, bound),
        })
        .collect()
}
