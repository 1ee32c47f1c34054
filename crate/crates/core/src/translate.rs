//! Translations between elementary and algebraic formers, the principal-class
//! theorem, the truncated hierarchy and extraction of formers from closure properties.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebraic::{
    build_id_skeleton, check_weak_pullback, self_composite, AlgId, AlgIdSkeleton, AlgPi, AlgSigma, AlgUnit, AlgUniverse,
    Lifter, PolyShape, WeakPullbackStructure,
};
use crate::elementary::{
    check_elem_id, check_elem_pi, check_elem_sigma, check_elem_unit, id_context, ElemId, ElemPi, ElemSigma,
    ElemStructures, ElemUnit,
};
use crate::enumerate::{all_maps, maps_upto, objects_upto, slice_homs};
use crate::error::{Error, Result};
use crate::finset::{bang, is_pullback, point, pullback, terminal, FinMap, FinObj, Square};
use crate::mapclass::{
    check_pi_preclan, check_preclan, principal_class, pullback_square_oracle, union_class, AxiomReport, MapClass,
};
use crate::poly::{decompose, distributivity, recompose, PolyApplication, PolyDecomposition};
use crate::report::{LawReport, Verdict};
use crate::universe::{check_universe_lift, ContextExtension, Universe, UniverseTower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    ElemToAlg,
    AlgToElem,
    Roundtrip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Former {
    Unit,
    Pi,
    Sigma,
    Id,
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e2a" => Ok(Direction::ElemToAlg),
            "a2e" => Ok(Direction::AlgToElem),
            "roundtrip" => Ok(Direction::Roundtrip),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl FromStr for Former {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Former::Unit),
            "pi" => Ok(Former::Pi),
            "sigma" => Ok(Former::Sigma),
            "id" => Ok(Former::Id),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl fmt::Display for Former {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Former::Unit => "unit",
            Former::Pi => "pi",
            Former::Sigma => "sigma",
            Former::Id => "id",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationReport {
    pub direction: Direction,
    pub former: Former,
    /// The constructed maps (algebraic) or a summary of the operations (elementary).
    pub structure: Value,
    pub verdicts: Vec<Verdict>,
    pub roundtrip: Option<Verdict>,
}

impl TranslationReport {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass) && self.roundtrip.as_ref().is_none_or(|v| v.pass)
    }
}

fn require(report: &LawReport) -> Result<()> {
    match report.verdicts.iter().find(|v| !v.pass) {
        Some(v) => Err(Error::LawViolation(format!("{} fails, refusing to translate", v.id))),
        None => Ok(()),
    }
}

fn require_universe(found: &[&Universe], au: &AlgUniverse) -> Result<()> {
    if found.iter().all(|u| **u == au.universe) {
        Ok(())
    } else {
        Err(Error::LawViolation("former does not live on the given universe".into()))
    }
}

fn extension_of(d: PolyDecomposition) -> (ContextExtension, FinMap) {
    (ContextExtension { a: d.fst, pullback: d.snd_source }, d.snd)
}

fn verdict(id: &str, description: &str, ok: bool) -> Verdict {
    let mut v = Verdict::new(id, description);
    v.record(ok, || json!(null));
    v
}

fn map_on(dom: &FinObj, cod: &FinObj, f: impl Fn(usize) -> Result<usize>) -> Result<FinMap> {
    let table = (0..dom.len()).map(f).collect::<Result<Vec<_>>>()?;
    FinMap::new(dom.clone(), cod.clone(), table)
}

/// Evaluates a former on each point of a polynomial application.
fn pointwise(app: &PolyApplication, cod: &FinObj, f: impl Fn(&ContextExtension, &FinMap) -> Result<FinMap>) -> Result<FinMap> {
    map_on(&app.total, cod, |p| {
        let (ext, snd) = extension_of(decompose(app, &point(&app.total, p))?);
        Ok(f(&ext, &snd)?.apply(0))
    })
}

/// Cones of a square with apex of size ≤ bound, as pairs (x, y).
fn cones(square: &Square, bound: usize) -> Result<Vec<(FinMap, FinMap)>> {
    let strong = pullback(&square.right, &square.bottom)?;
    let mut out = Vec::new();
    for w in objects_upto(bound) {
        for m in all_maps(&w, &strong.apex) {
            out.push((m.compose(&strong.proj1)?, m.compose(&strong.proj2)?));
        }
    }
    Ok(out)
}

/// Compares a lift built from elementary operations with the unique pullback lift.
fn lift_verdict(
    id: &str,
    square: &Square,
    bound: usize,
    build: impl Fn(&FinMap, &FinMap) -> Result<FinMap>,
) -> Result<Verdict> {
    let mut v = Verdict::new(id, "the lift built from the elementary eliminator is the pullback lift");
    for (x, y) in cones(square, bound)? {
        let ok = match (build(&x, &y), square.lift(&x, &y)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        v.record(ok, || json!({ "x": x.to_json(), "y": y.to_json() }));
    }
    Ok(v)
}

fn square_verdict(id: &str, checked: Result<bool>) -> Verdict {
    let mut v = Verdict::new(id, "the defining square commutes and is a pullback");
    match checked {
        Ok(ok) => v.record(ok, || json!("not a pullback")),
        Err(e) => v.fail(json!(e.to_string())),
    }
    v
}

pub fn elem_to_alg_unit(elem: &ElemUnit, au: &AlgUniverse, bound: usize) -> Result<(AlgUnit, TranslationReport)> {
    require_universe(&[&elem.universe], au)?;
    require(&check_elem_unit(elem, bound))?;
    let star = terminal();
    let unit = AlgUnit::new(&au.universe, (elem.unit_type)(&star)?, (elem.unit_term)(&star)?)?;
    let report = TranslationReport {
        direction: Direction::ElemToAlg,
        former: Former::Unit,
        structure: json!({ "Unit": unit.type_map.to_json(), "unit": unit.term_map.to_json() }),
        verdicts: vec![square_verdict("alg.unit.square", unit.check(&au.universe))],
        roundtrip: None,
    };
    Ok((unit, report))
}

pub fn elem_to_alg_pi(elem: &ElemPi, au: &AlgUniverse, bound: usize) -> Result<(AlgPi, TranslationReport)> {
    require_universe(&[&elem.dom, &elem.fam, &elem.result], au)?;
    require(&check_elem_pi(elem, bound))?;
    let u = &au.universe;
    let shape = Arc::new(PolyShape::new(u));
    let pi_map = pointwise(&shape.ty_app, u.ty(), |ext, b| (elem.form)(ext, b))?;
    let lam_map = pointwise(&shape.tm_app, u.tm(), |ext, b| (elem.lam)(ext, &b.compose(u.tp())?, b))?;
    let alg = AlgPi { shape: shape.clone(), pi_map, lam_map };
    let mut verdicts = vec![square_verdict("alg.pi.square", alg.check(u))];
    if let Ok(square) = alg.square(u) {
        verdicts.push(lift_verdict("alg.pi.lift", &square, bound, |f, y| {
            let (ext, b) = extension_of(decompose(&shape.ty_app, y)?);
            recompose(&shape.tm_app, &ext.a, &(elem.unlam)(&ext, &b, f)?)
        })?);
    }
    let report = TranslationReport {
        direction: Direction::ElemToAlg,
        former: Former::Pi,
        structure: json!({ "Pi": alg.pi_map.to_json(), "lam": alg.lam_map.to_json() }),
        verdicts,
        roundtrip: None,
    };
    Ok((alg, report))
}

pub fn elem_to_alg_sigma(elem: &ElemSigma, au: &AlgUniverse, bound: usize) -> Result<(AlgSigma, TranslationReport)> {
    require_universe(&[&elem.dom, &elem.fam, &elem.result], au)?;
    require(&check_elem_sigma(elem, bound))?;
    let u = &au.universe;
    let comp = Arc::new(self_composite(u));
    let ty_app = &comp.inner_app;
    let sigma_map = pointwise(ty_app, u.ty(), |ext, b| (elem.form)(ext, b))?;
    let pair_map = map_on(&comp.comp_dom, u.tm(), |c| {
        let (p, e, e2) = comp.decode(c);
        let (ext, b_ty) = extension_of(decompose(ty_app, &point(&ty_app.total, p))?);
        Ok((elem.pair)(&ext, &b_ty, &point(u.tm(), e), &point(u.tm(), e2))?.apply(0))
    })?;
    let alg = AlgSigma { comp: comp.clone(), sigma_map, pair_map };
    let mut verdicts = vec![square_verdict("alg.sigma.square", alg.check(u))];
    if let Ok(square) = alg.square(u) {
        verdicts.push(lift_verdict("alg.sigma.lift", &square, bound, |s, y| {
            let (ext, b_ty) = extension_of(decompose(ty_app, y)?);
            let a = (elem.fst)(&ext, &b_ty, s)?;
            let b = (elem.snd)(&ext, &b_ty, s)?;
            map_on(y.dom(), &comp.comp_dom, |g| {
                comp.encode(y.apply(g), a.apply(g), b.apply(g))
                    .ok_or_else(|| Error::TypeMismatch { witness: y.dom().label(g).clone() })
            })
        })?);
    }
    let report = TranslationReport {
        direction: Direction::ElemToAlg,
        former: Former::Sigma,
        structure: json!({ "Sigma": alg.sigma_map.to_json(), "pair": alg.pair_map.to_json() }),
        verdicts,
        roundtrip: None,
    };
    Ok((alg, report))
}

/// The chosen lift of a cone ((a, c_refl), (a, C)) built from an elementary J eliminator.
fn lifter_from_j(elem: ElemId, skel: Arc<AlgIdSkeleton>) -> Lifter {
    Arc::new(move |x: &FinMap, y: &FinMap| {
        let a = x.compose(&skel.tm_tm.proj1)?;
        let c_refl = x.compose(&skel.tm_tm.proj2)?;
        let d = decompose(&skel.i_ty_app, y)?;
        if d.fst != a {
            return Err(Error::SquareViolation("cone does not commute".into()));
        }
        let ctx = id_context(&elem, &a.compose(skel.universe.tp())?, &a)?;
        let (_, bij) = skel.dictionary(&a, &ctx.ext_a, &ctx.ext_id)?;
        let motive = bij.compose(&d.snd)?;
        let j = (elem.j)(&ctx, &motive, &c_refl)?;
        let inv = bij.inverse().expect("dictionary is bijective");
        recompose(&skel.i_tm_app, &a, &inv.compose(&j)?)
    })
}

pub fn elem_to_alg_id(elem: &ElemId, au: &AlgUniverse, bound: usize) -> Result<(AlgId, TranslationReport)> {
    require_universe(&[&elem.universe], au)?;
    require(&check_elem_id(elem, bound))?;
    let u = &au.universe;
    let tm_tp = u.context_extend(u.tp())?;
    let id_map = map_on(tm_tp.ext(), u.ty(), |k| {
        let (t, t2) = tm_tp.parts(k);
        let a_type = point(u.ty(), u.tp().apply(t));
        Ok((elem.form)(&a_type, &point(u.tm(), t), &point(u.tm(), t2))?.apply(0))
    })?;
    let refl_map = map_on(u.tm(), u.tm(), |t| {
        Ok((elem.refl)(&point(u.ty(), u.tp().apply(t)), &point(u.tm(), t))?.apply(0))
    })?;
    let skel = Arc::new(build_id_skeleton(u, id_map, refl_map)?);
    let square = skel.v_square(&au.class)?;
    let weak = WeakPullbackStructure { square, lifter: lifter_from_j(elem.clone(), skel.clone()), coherent: elem.j_stable };
    let alg = AlgId { skeleton: skel, weak };
    let report = TranslationReport {
        direction: Direction::ElemToAlg,
        former: Former::Id,
        structure: id_json(&alg),
        verdicts: alg.check(bound)?.verdicts,
        roundtrip: None,
    };
    Ok((alg, report))
}

fn id_json(alg: &AlgId) -> Value {
    let s = &alg.skeleton;
    json!({
        "Id": s.id_map.to_json(),
        "refl": s.refl_map.to_json(),
        "delta": s.delta.to_json(),
        "rho": s.rho.to_json(),
        "i": s.i_map.to_json(),
        "coherent": alg.weak.coherent,
    })
}

fn elem_report(former: Former, report: LawReport) -> TranslationReport {
    TranslationReport {
        direction: Direction::AlgToElem,
        former,
        structure: json!({ "checked_clauses": report.verdicts.iter().map(|v| v.id.clone()).collect::<Vec<_>>() }),
        verdicts: report.verdicts,
        roundtrip: None,
    }
}

fn require_pullback(checked: Result<bool>, former: &str) -> Result<()> {
    match checked {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::SquareViolation(format!("the {former} square is not a pullback"))),
        Err(e) => Err(Error::SquareViolation(format!("the {former} square: {e}"))),
    }
}

pub fn alg_to_elem_unit(alg: &AlgUnit, au: &AlgUniverse) -> Result<ElemUnit> {
    require_pullback(alg.check(&au.universe), "Unit")?;
    let (ty, tm) = (alg.type_map.clone(), alg.term_map.clone());
    Ok(ElemUnit {
        universe: au.universe.clone(),
        unit_type: Arc::new(move |g| bang(g).compose(&ty)),
        unit_term: Arc::new(move |g| bang(g).compose(&tm)),
    })
}

pub fn alg_to_elem_pi(alg: &AlgPi, au: &AlgUniverse) -> Result<ElemPi> {
    let u = &au.universe;
    require_pullback(alg.check(u), "Π")?;
    let square = Arc::new(alg.square(u)?);
    let (s1, s2, s3) = (alg.shape.clone(), alg.shape.clone(), alg.shape.clone());
    let (pi_map, lam_map) = (alg.pi_map.clone(), alg.lam_map.clone());
    Ok(ElemPi {
        dom: u.clone(),
        fam: u.clone(),
        result: u.clone(),
        form: Arc::new(move |ext, b| recompose(&s1.ty_app, &ext.a, b)?.compose(&pi_map)),
        lam: Arc::new(move |ext, _b_ty, b| recompose(&s2.tm_app, &ext.a, b)?.compose(&lam_map)),
        unlam: Arc::new(move |ext, b_ty, f| {
            let y = recompose(&s3.ty_app, &ext.a, b_ty)?;
            let lift = square.lift(f, &y)?;
            Ok(decompose(&s3.tm_app, &lift)?.snd)
        }),
    })
}

pub fn alg_to_elem_sigma(alg: &AlgSigma, au: &AlgUniverse) -> Result<ElemSigma> {
    let u = &au.universe;
    require_pullback(alg.check(u), "Σ")?;
    let square = Arc::new(alg.square(u)?);
    let comp = alg.comp.clone();
    let sigma_map = alg.sigma_map.clone();
    let pair_map = alg.pair_map.clone();
    let form = {
        let comp = comp.clone();
        Arc::new(move |ext: &ContextExtension, b: &FinMap| recompose(&comp.inner_app, &ext.a, b)?.compose(&sigma_map))
    };
    let pair = {
        let comp = comp.clone();
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, a: &FinMap, b: &FinMap| {
            let y = recompose(&comp.inner_app, &ext.a, b_ty)?;
            let tuple = map_on(y.dom(), &comp.comp_dom, |g| {
                comp.encode(y.apply(g), a.apply(g), b.apply(g))
                    .ok_or_else(|| Error::TypeMismatch { witness: y.dom().label(g).clone() })
            })?;
            tuple.compose(&pair_map)
        })
    };
    let projection = |which: usize| {
        let (comp, square) = (comp.clone(), square.clone());
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, s: &FinMap| {
            let y = recompose(&comp.inner_app, &ext.a, b_ty)?;
            let lift = square.lift(s, &y)?;
            let tm = square.right.dom().clone();
            map_on(s.dom(), &tm, |g| {
                let (_, e, e2) = comp.decode(lift.apply(g));
                Ok(if which == 0 { e } else { e2 })
            })
        }) as crate::elementary::TermOp
    };
    Ok(ElemSigma {
        dom: u.clone(),
        fam: u.clone(),
        result: u.clone(),
        form,
        pair,
        fst: projection(0),
        snd: projection(1),
    })
}

pub fn alg_to_elem_id(alg: &AlgId, au: &AlgUniverse) -> Result<ElemId> {
    let u = &au.universe;
    let skel = alg.skeleton.clone();
    if skel.universe != *u {
        return Err(Error::SquareViolation("Id structure lives on another universe".into()));
    }
    let form = {
        let skel = skel.clone();
        Arc::new(move |_a_type: &FinMap, a0: &FinMap, a1: &FinMap| {
            skel.universe.pair_sub(&skel.tm_tp, a0, a1)?.compose(&skel.id_map)
        })
    };
    let refl = {
        let refl_map = skel.refl_map.clone();
        Arc::new(move |_a_type: &FinMap, a: &FinMap| a.compose(&refl_map))
    };
    let j = {
        let (skel, lifter) = (skel.clone(), alg.weak.lifter.clone());
        Arc::new(move |ctx: &crate::elementary::IdContext, c_ty: &FinMap, c: &FinMap| {
            let (_, bij) = skel.dictionary(&ctx.a, &ctx.ext_a, &ctx.ext_id)?;
            let inv = bij.inverse().expect("dictionary is bijective");
            let x = skel.tm_tm.mediate(&ctx.a, c)?;
            let y = recompose(&skel.i_ty_app, &ctx.a, &inv.compose(c_ty)?)?;
            let lift = lifter(&x, &y)?;
            bij.compose(&decompose(&skel.i_tm_app, &lift)?.snd)
        })
    };
    Ok(ElemId { universe: u.clone(), form, refl, j, j_stable: alg.weak.coherent })
}

/// Terms of type `a`.
fn terms(a: &FinMap, u: &Universe) -> Vec<FinMap> {
    slice_homs(a, u.tp()).collect()
}

fn same(a: Result<FinMap>, b: Result<FinMap>) -> bool {
    a.ok() == b.ok()
}

fn compare_unit(x: &ElemUnit, y: &ElemUnit, bound: usize) -> Verdict {
    let mut v = Verdict::new("roundtrip.elem", "Unit and unit agree on every context");
    for g in objects_upto(bound) {
        let ok = same((x.unit_type)(&g), (y.unit_type)(&g)) && same((x.unit_term)(&g), (y.unit_term)(&g));
        v.record(ok, || json!({ "context": g.to_json() }));
    }
    v
}

fn compare_pi(x: &ElemPi, y: &ElemPi, bound: usize) -> Result<Verdict> {
    let u = &x.dom;
    let mut v = Verdict::new("roundtrip.elem", "Π, lam and unlam agree on every input");
    for g in objects_upto(bound) {
        for a in all_maps(&g, u.ty()) {
            let ext = u.context_extend(&a)?;
            for b_ty in all_maps(ext.ext(), u.ty()) {
                let witness = || json!({ "A": a.to_json(), "B": b_ty.to_json() });
                let pi = (x.form)(&ext, &b_ty).ok();
                v.record(pi == (y.form)(&ext, &b_ty).ok(), witness);
                for b in terms(&b_ty, u) {
                    v.record(same((x.lam)(&ext, &b_ty, &b), (y.lam)(&ext, &b_ty, &b)), witness);
                }
                let Some(pi) = pi else { continue };
                for f in terms(&pi, u) {
                    v.record(same((x.unlam)(&ext, &b_ty, &f), (y.unlam)(&ext, &b_ty, &f)), witness);
                }
            }
        }
    }
    Ok(v)
}

fn compare_sigma(x: &ElemSigma, y: &ElemSigma, bound: usize) -> Result<Verdict> {
    let u = &x.dom;
    let mut v = Verdict::new("roundtrip.elem", "Σ, pair, fst and snd agree on every input");
    for g in objects_upto(bound) {
        for a_ty in all_maps(&g, u.ty()) {
            let ext = u.context_extend(&a_ty)?;
            for b_ty in all_maps(ext.ext(), u.ty()) {
                let witness = || json!({ "A": a_ty.to_json(), "B": b_ty.to_json() });
                let sigma = (x.form)(&ext, &b_ty).ok();
                v.record(sigma == (y.form)(&ext, &b_ty).ok(), witness);
                for a in terms(&a_ty, u) {
                    let at = u.pair_sub(&ext, &FinMap::identity(&g), &a)?.compose(&b_ty)?;
                    for b in terms(&at, u) {
                        v.record(same((x.pair)(&ext, &b_ty, &a, &b), (y.pair)(&ext, &b_ty, &a, &b)), witness);
                    }
                }
                let Some(sigma) = sigma else { continue };
                for s in terms(&sigma, u) {
                    v.record(same((x.fst)(&ext, &b_ty, &s), (y.fst)(&ext, &b_ty, &s)), witness);
                    v.record(same((x.snd)(&ext, &b_ty, &s), (y.snd)(&ext, &b_ty, &s)), witness);
                }
            }
        }
    }
    Ok(v)
}

fn compare_id(x: &ElemId, y: &ElemId, bound: usize) -> Result<Verdict> {
    let u = &x.universe;
    let mut v = Verdict::new("roundtrip.elem", "Id, refl and J agree on every input");
    for g in objects_upto(bound) {
        for a_ty in all_maps(&g, u.ty()) {
            let ts = terms(&a_ty, u);
            for a0 in &ts {
                for a1 in &ts {
                    let ok = same((x.form)(&a_ty, a0, a1), (y.form)(&a_ty, a0, a1));
                    v.record(ok, || json!({ "A": a_ty.to_json(), "a0": a0.to_json(), "a1": a1.to_json() }));
                }
            }
            for a in &ts {
                let witness = || json!({ "A": a_ty.to_json(), "a": a.to_json() });
                v.record(same((x.refl)(&a_ty, a), (y.refl)(&a_ty, a)), witness);
                let (cx, cy) = (id_context(x, &a_ty, a)?, id_context(y, &a_ty, a)?);
                if cx.id_family != cy.id_family || cx.rho != cy.rho {
                    v.fail(witness());
                    continue;
                }
                for c_ty in all_maps(cx.ext_id.ext(), u.ty()) {
                    for c in terms(&cx.rho.compose(&c_ty)?, u) {
                        v.record(same((x.j)(&cx, &c_ty, &c), (y.j)(&cy, &c_ty, &c)), witness);
                    }
                }
            }
        }
    }
    Ok(v)
}

fn alg_verdict(ok: bool) -> Verdict {
    verdict("roundtrip.alg", "the algebraic maps are reproduced exactly", ok)
}

/// Both roundtrips for one former: elem → alg → elem on operation tables
/// within bound, and alg → elem → alg on the algebraic maps.
pub fn roundtrip(former: Former, elem: &ElemStructures, au: &AlgUniverse, bound: usize) -> Result<LawReport> {
    let mut report = LawReport::new(format!("roundtrip.{former}"), bound);
    match former {
        Former::Unit => {
            let (alg, _) = elem_to_alg_unit(&elem.unit, au, bound)?;
            let back = alg_to_elem_unit(&alg, au)?;
            report.push(compare_unit(&elem.unit, &back, bound));
            let (again, _) = elem_to_alg_unit(&back, au, bound)?;
            report.push(alg_verdict(again.type_map == alg.type_map && again.term_map == alg.term_map));
        }
        Former::Pi => {
            let (alg, _) = elem_to_alg_pi(&elem.pi, au, bound)?;
            let back = alg_to_elem_pi(&alg, au)?;
            report.push(compare_pi(&elem.pi, &back, bound)?);
            let (again, _) = elem_to_alg_pi(&back, au, bound)?;
            report.push(alg_verdict(again.pi_map == alg.pi_map && again.lam_map == alg.lam_map));
        }
        Former::Sigma => {
            let (alg, _) = elem_to_alg_sigma(&elem.sigma, au, bound)?;
            let back = alg_to_elem_sigma(&alg, au)?;
            report.push(compare_sigma(&elem.sigma, &back, bound)?);
            let (again, _) = elem_to_alg_sigma(&back, au, bound)?;
            report.push(alg_verdict(again.sigma_map == alg.sigma_map && again.pair_map == alg.pair_map));
        }
        Former::Id => {
            let (alg, _) = elem_to_alg_id(&elem.id, au, bound)?;
            let back = alg_to_elem_id(&alg, au)?;
            report.push(compare_id(&elem.id, &back, bound)?);
            let (again, _) = elem_to_alg_id(&back, au, bound)?;
            let maps_agree = again.skeleton.id_map == alg.skeleton.id_map && again.skeleton.refl_map == alg.skeleton.refl_map;
            let mut lifts = Verdict::new("roundtrip.lifter", "the rebuilt lifter agrees with the original on every cone");
            let (agree, total) = crate::algebraic::lifter_agreement(&alg.weak, &again.weak, bound)?;
            lifts.record(agree == total, || json!({ "agree": agree, "total": total }));
            report.push(alg_verdict(maps_agree));
            report.push(lifts);
        }
    }
    Ok(report)
}

/// One translation in the requested direction. alg → elem starts from the
/// algebraic structure obtained from the given elementary model.
pub fn translate(
    direction: Direction,
    former: Former,
    elem: &ElemStructures,
    au: &AlgUniverse,
    bound: usize,
) -> Result<TranslationReport> {
    let mut report = match former {
        Former::Unit => elem_to_alg_unit(&elem.unit, au, bound)?.1,
        Former::Pi => elem_to_alg_pi(&elem.pi, au, bound)?.1,
        Former::Sigma => elem_to_alg_sigma(&elem.sigma, au, bound)?.1,
        Former::Id => elem_to_alg_id(&elem.id, au, bound)?.1,
    };
    match direction {
        Direction::ElemToAlg => {}
        Direction::AlgToElem => {
            report = match former {
                Former::Unit => {
                    let back = alg_to_elem_unit(&elem_to_alg_unit(&elem.unit, au, bound)?.0, au)?;
                    elem_report(former, check_elem_unit(&back, bound))
                }
                Former::Pi => {
                    let back = alg_to_elem_pi(&elem_to_alg_pi(&elem.pi, au, bound)?.0, au)?;
                    elem_report(former, check_elem_pi(&back, bound))
                }
                Former::Sigma => {
                    let back = alg_to_elem_sigma(&elem_to_alg_sigma(&elem.sigma, au, bound)?.0, au)?;
                    elem_report(former, check_elem_sigma(&back, bound))
                }
                Former::Id => {
                    let back = alg_to_elem_id(&elem_to_alg_id(&elem.id, au, bound)?.0, au)?;
                    elem_report(former, check_elem_id(&back, bound))
                }
            }
        }
        Direction::Roundtrip => {
            let rt = roundtrip(former, elem, au, bound)?;
            let mut merged = Verdict::new("roundtrip", "both roundtrips reproduce identical tables");
            for v in rt.verdicts {
                merged.merge(v);
            }
            report.direction = Direction::Roundtrip;
            report.roundtrip = Some(merged);
        }
    }
    Ok(report)
}

/// Extensional agreement of two classes on all maps between objects of size ≤ bound.
pub fn class_agreement(a: &MapClass, b: &MapClass, bound: usize) -> Verdict {
    let mut v = Verdict::new("class.agree", format!("{} and {} contain the same maps", a.name(), b.name()));
    for f in maps_upto(bound) {
        v.record(a.contains(&f) == b.contains(&f), || f.to_json());
    }
    v
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub class: MapClass,
    pub axioms: Vec<AxiomReport>,
    pub witnesses: Vec<Verdict>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass) && self.witnesses.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({ "class": self.class.name(), "axioms": self.axioms, "witnesses": self.witnesses })
    }
}

fn unit_witness(unit: &ElemUnit, bound: usize) -> Result<Verdict> {
    let u = &unit.universe;
    let mut v = Verdict::new("thm.unit-iso", "u = id.unit inverts the display of Unit");
    for b in objects_upto(bound) {
        let ext = u.context_extend(&(unit.unit_type)(&b)?)?;
        let inv = u.pair_sub(&ext, &FinMap::identity(&b), &(unit.unit_term)(&b)?)?;
        let ok = inv.compose(ext.display())?.is_identity() && ext.display().compose(&inv)?.is_identity();
        v.record(ok, || json!({ "B": b.to_json() }));
    }
    Ok(v)
}

fn sigma_witnesses(s: &ElemSigma, bound: usize) -> Result<Vec<Verdict>> {
    let u = &s.dom;
    let mut over = Verdict::new("thm.sigma.p-over-base", "p ≫ d_Σ = d_B ≫ d_A");
    let mut eqs = vec![
        Verdict::new("thm.sigma.pp-1", "p ≫ p⁻¹ ≫ d_B ≫ d_A = d_B ≫ d_A"),
        Verdict::new("thm.sigma.pp-2", "p ≫ p⁻¹ ≫ d_B ≫ var_A = d_B ≫ var_A"),
        Verdict::new("thm.sigma.pp-3", "p ≫ p⁻¹ ≫ var_B = var_B"),
        Verdict::new("thm.sigma.inv-1", "p⁻¹ ≫ p ≫ d_Σ = d_Σ"),
        Verdict::new("thm.sigma.inv-2", "p⁻¹ ≫ p ≫ var_Σ = var_Σ"),
    ];
    let mut iso = Verdict::new("thm.sigma.iso", "p and p⁻¹ are mutually inverse");
    for g in objects_upto(bound) {
        for a_ty in all_maps(&g, u.ty()) {
            let ext_a = u.context_extend(&a_ty)?;
            for b_ty in all_maps(ext_a.ext(), u.ty()) {
                let witness = || json!({ "A": a_ty.to_json(), "B": b_ty.to_json() });
                let ext_b = u.context_extend(&b_ty)?;
                let ext_s = u.context_extend(&(s.form)(&ext_a, &b_ty)?)?;
                let down = ext_b.display().compose(ext_a.display())?;
                let (sub, tilde) = u.weaken(&down, &ext_a)?;
                let a = ext_b.display().compose(ext_a.var_map())?;
                let term = (s.pair)(&sub, &tilde.compose(&b_ty)?, &a, ext_b.var_map())?;
                let p = u.pair_sub(&ext_s, &down, &term)?;

                let (sub2, tilde2) = u.weaken(ext_s.display(), &ext_a)?;
                let b2 = tilde2.compose(&b_ty)?;
                let first = (s.fst)(&sub2, &b2, ext_s.var_map())?;
                let second = (s.snd)(&sub2, &b2, ext_s.var_map())?;
                let q = u.pair_sub(&ext_a, ext_s.display(), &first)?;
                let p_inv = u.pair_sub(&ext_b, &q, &second)?;

                over.record(p.compose(ext_s.display())? == down, witness);
                let pp = p.compose(&p_inv)?;
                let ip = p_inv.compose(&p)?;
                let checks = [
                    pp.compose(&down)? == down,
                    pp.compose(ext_b.display())?.compose(ext_a.var_map())? == a,
                    pp.compose(ext_b.var_map())? == *ext_b.var_map(),
                    ip.compose(ext_s.display())? == *ext_s.display(),
                    ip.compose(ext_s.var_map())? == *ext_s.var_map(),
                ];
                for (v, ok) in eqs.iter_mut().zip(checks) {
                    v.record(ok, witness);
                }
                iso.record(pp.is_identity() && ip.is_identity(), witness);
            }
        }
    }
    let mut out = vec![over];
    out.extend(eqs);
    out.push(iso);
    Ok(out)
}

fn pi_witnesses(pi: &ElemPi, bound: usize) -> Result<Vec<Verdict>> {
    let u = &pi.dom;
    let mut bij = Verdict::new("thm.pi.bijection", "l and l⁻¹ are inverse bijections between the hom-sets");
    let mut nat = Verdict::new("thm.pi.natural", "l(τ̃ ≫ b) = τ ≫ l(b)");
    for g in objects_upto(bound) {
        for a_ty in all_maps(&g, u.ty()) {
            let ext_a = u.context_extend(&a_ty)?;
            for b_ty in all_maps(ext_a.ext(), u.ty()) {
                let ext_b = u.context_extend(&b_ty)?;
                let ext_p = u.context_extend(&(pi.form)(&ext_a, &b_ty)?)?;
                let l = |sigma: &FinMap, b: &FinMap| -> Result<FinMap> {
                    let (sub, tilde) = u.weaken(sigma, &ext_a)?;
                    let f = (pi.lam)(&sub, &tilde.compose(&b_ty)?, &b.compose(ext_b.var_map())?)?;
                    u.pair_sub(&ext_p, sigma, &f)
                };
                let l_inv = |sigma: &FinMap, f: &FinMap| -> Result<FinMap> {
                    let (sub, tilde) = u.weaken(sigma, &ext_a)?;
                    let b = (pi.unlam)(&sub, &tilde.compose(&b_ty)?, &f.compose(ext_p.var_map())?)?;
                    u.pair_sub(&ext_b, &tilde, &b)
                };
                for d in objects_upto(bound) {
                    for sigma in all_maps(&d, &g) {
                        let witness = || json!({ "A": a_ty.to_json(), "B": b_ty.to_json(), "sigma": sigma.to_json() });
                        let (_, tilde) = u.weaken(&sigma, &ext_a)?;
                        let bs: Vec<FinMap> = slice_homs(&tilde, ext_b.display()).collect();
                        let fs: Vec<FinMap> = slice_homs(&sigma, ext_p.display()).collect();
                        let mut ok = bs.len() == fs.len();
                        for b in &bs {
                            ok &= matches!(l(&sigma, b).and_then(|f| l_inv(&sigma, &f)), Ok(back) if back == *b);
                        }
                        for f in &fs {
                            ok &= matches!(l_inv(&sigma, f).and_then(|b| l(&sigma, &b)), Ok(back) if back == *f);
                        }
                        bij.record(ok, witness);
                        let sub = u.context_extend(&sigma.compose(&a_ty)?)?;
                        for xi in objects_upto(bound) {
                            for tau in all_maps(&xi, &d) {
                                let (_, tau_tilde) = u.weaken(&tau, &sub)?;
                                let composite = tau.compose(&sigma)?;
                                for b in &bs {
                                    let lhs = l(&composite, &tau_tilde.compose(b)?)?;
                                    let rhs = tau.compose(&l(&sigma, b)?)?;
                                    nat.record(lhs == rhs, || json!({ "at": witness(), "tau": tau.to_json(), "b": b.to_json() }));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(vec![bij, nat])
}

/// The principal class of a universe with Unit, Σ and Π is a π-preclan, with
/// the witnesses of the proof built and checked elementwise.
pub fn principal_preclan_theorem(elem: &ElemStructures, bound: usize) -> Result<TheoremReport> {
    for report in [check_elem_unit(&elem.unit, bound), check_elem_sigma(&elem.sigma, bound), check_elem_pi(&elem.pi, bound)] {
        require(&report)?;
    }
    let class = elem.unit.universe.principal_class();
    let mut axioms = check_preclan(&class, bound);
    axioms.push(check_pi_preclan(&class, bound));
    let mut witnesses = vec![verdict("thm.tp-in-class", "tp is in its principal class", class.contains(elem.unit.universe.tp()))];
    witnesses.push(unit_witness(&elem.unit, bound)?);
    witnesses.extend(sigma_witnesses(&elem.sigma, bound)?);
    witnesses.extend(pi_witnesses(&elem.pi, bound)?);
    Ok(TheoremReport { class, axioms, witnesses })
}

#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub union: MapClass,
    pub axioms: Vec<AxiomReport>,
    pub verdicts: Vec<Verdict>,
    pub universes: Vec<AlgUniverse>,
}

impl HierarchyReport {
    pub fn pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass) && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({ "union": self.union.name(), "axioms": self.axioms, "verdicts": self.verdicts, "levels": self.universes.len() })
    }
}

/// The union of the principal classes of a tower, truncated to its length.
pub fn hierarchy_corollary(tower: &UniverseTower, bound: usize) -> Result<HierarchyReport> {
    if tower.levels.len() < 2 {
        return Err(Error::BoundsTooTight("a hierarchy needs at least two levels".into()));
    }
    let classes: Vec<MapClass> = tower.levels.iter().map(|u| principal_class(u.tp())).collect();
    let union = union_class(&classes);
    let mut verdicts = Vec::new();
    let maps = maps_upto(bound);
    for (n, lift) in tower.lifts.iter().enumerate() {
        let square_ok = check_universe_lift(lift) && is_pullback(&lift.morphism.square()?)?;
        verdicts.push(verdict(&format!("hierarchy.lift-{n}"), "the lift square is a pullback", square_ok));
        let mut nested = Verdict::new(format!("hierarchy.nested-{n}"), format!("R_{n} ⊆ R_{}", n + 1));
        for f in &maps {
            nested.record(!classes[n].contains(f) || classes[n + 1].contains(f), || f.to_json());
        }
        verdicts.push(nested);
        let low = &lift.morphism.source;
        let ty_ok = is_pullback(&lift.classifier_square()?)? && classes[n + 1].contains(&bang(low.ty()));
        verdicts.push(verdict(&format!("hierarchy.ty-{n}-classified"), "Ty_n is a class object via U₀", ty_ok));
        let tm_bang = low.tp().compose(&bang(low.ty()))?;
        let tm_ok = union.contains(low.tp()) && union.contains(&bang(low.ty())) && union.contains(&tm_bang);
        verdicts.push(verdict(&format!("hierarchy.tm-{n}-classified"), "Tm_n is a class object by composition", tm_ok));
    }
    let too_big = tower.bounds.iter().max().copied().unwrap_or(0) + 1;
    let excluded = !union.contains(&bang(&FinObj::canonical(too_big)));
    verdicts.push(verdict("hierarchy.excluded", &format!("a map with a fiber of size {too_big} is not in the union"), excluded));
    let axioms = check_preclan(&union, bound);
    let universes = tower
        .levels
        .iter()
        .map(|u| AlgUniverse::new(u.clone(), union.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(HierarchyReport { union, axioms, verdicts, universes })
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub unit: Option<AlgUnit>,
    pub sigma: Option<AlgSigma>,
    pub pi: Option<AlgPi>,
    pub verdicts: Vec<Verdict>,
}

impl Extraction {
    pub fn to_json(&self) -> Value {
        json!({
            "unit": self.unit.as_ref().map(|a| json!({ "Unit": a.type_map.to_json(), "unit": a.term_map.to_json() })),
            "sigma": self.sigma.as_ref().map(|a| json!({ "Sigma": a.sigma_map.to_json(), "pair": a.pair_map.to_json() })),
            "pi": self.pi.as_ref().map(|a| json!({ "Pi": a.pi_map.to_json(), "lam": a.lam_map.to_json() })),
            "verdicts": self.verdicts,
        })
    }
}

/// Searches classifying squares for the maps the closure properties put in R_tp.
pub fn extract_alg_from_closure(au: &AlgUniverse, bound: usize) -> Result<Extraction> {
    let u = &au.universe;
    let class = u.principal_class();
    let mut verdicts = Vec::new();

    let id_star = FinMap::identity(&terminal());
    let unit = match class.contains(&id_star) {
        true => pullback_square_oracle(&id_star, u.tp())?
            .map(|sq| AlgUnit::new(u, sq.bottom, sq.top))
            .transpose()?,
        false => None,
    };
    if let Some(unit) = &unit {
        verdicts.push(square_verdict("extract.unit", unit.check(u)));
    }

    let comp = Arc::new(self_composite(u));
    let sigma = match class.contains(&comp.sig) {
        true => match pullback_square_oracle(&comp.sig, u.tp())? {
            Some(sq) => Some(AlgSigma { comp: comp.clone(), sigma_map: sq.bottom, pair_map: sq.top }),
            None => None,
        },
        false => None,
    };
    if let Some(sigma) = &sigma {
        verdicts.push(square_verdict("extract.sigma", sigma.check(u)));
    }

    // P_tp tp is the pushforward along tp of h = Tm^* tp: Tm × Tm → Tm × Ty over Tm.
    let shape = Arc::new(PolyShape::new(u));
    let tm_ty = pullback(&bang(u.tm()), &bang(u.ty()))?;
    let tm_tm = pullback(&bang(u.tm()), &bang(u.tm()))?;
    let h = FinMap::from_fn(&tm_tm.apex, &tm_ty.apex, |k| {
        let (t, t2) = tm_tm.pairs()[k];
        tm_ty.index_of(t, u.tp().apply(t2)).expect("product pair")
    });
    let witness = distributivity(u.tp(), &tm_ty.proj1, &MapClass::all(), bound)?;
    let pushed = witness.push_map(&h)?;
    let (push_in, restricted_in) = witness.pushforward_stability_check(&h, &class)?;
    let direct = class.contains(&shape.p_tp);
    let same_shape = pushed.fiber_sizes() == shape.p_tp.fiber_sizes();
    verdicts.push(verdict(
        "extract.pi.route",
        "membership of P_tp tp agrees with the pushed h and its distributivity form",
        same_shape && push_in == direct && restricted_in == direct,
    ));
    let pi = match direct {
        true => match pullback_square_oracle(&shape.p_tp, u.tp())? {
            Some(sq) => Some(AlgPi { shape: shape.clone(), pi_map: sq.bottom, lam_map: sq.top }),
            None => None,
        },
        false => None,
    };
    if let Some(pi) = &pi {
        verdicts.push(square_verdict("extract.pi", pi.check(u)));
    }
    Ok(Extraction { unit, sigma, pi, verdicts })
}

/// Two classifying maps over the same base agree up to fiberwise bijection
/// iff their tp-fibers have equal sizes pointwise.
pub fn fiberwise_agree(u: &Universe, a: &FinMap, b: &FinMap) -> bool {
    let sizes = u.tp().fiber_sizes();
    a.dom() == b.dom() && (0..a.dom().len()).all(|p| sizes[a.apply(p)] == sizes[b.apply(p)])
}

/// Re-checks a weak pullback structure at a bound, for reporting.
pub fn id_weak_report(alg: &AlgId, bound: usize) -> Result<LawReport> {
    check_weak_pullback(&alg.weak, bound)
}
