//! Algebraic type formers: maps with pullback-square witnesses, and Id as a weak pullback.

use std::sync::Arc;

use serde_json::json;

use crate::enumerate::{all_maps, objects_upto};
use crate::error::{Error, Result};
use crate::finset::{bang, is_pullback, pullback, terminal, FinMap, FinObj, PullbackResult, Square};
use crate::mapclass::MapClass;
use crate::poly::{apply_poly_map, compose_maps, poly_map_between, vertical_from_maps, CompositeSignature, PolyApplication};
use crate::report::{LawReport, Verdict};
use crate::universe::{ContextExtension, Universe};

/// A universe whose tp lies in an ambient class.
#[derive(Clone, Debug)]
pub struct AlgUniverse {
    pub universe: Universe,
    pub class: MapClass,
}

impl AlgUniverse {
    pub fn new(universe: Universe, class: MapClass) -> Result<Self> {
        if !class.contains(universe.tp()) {
            return Err(Error::ClassViolation(format!("tp is not in class {}", class.name())));
        }
        Ok(AlgUniverse { universe, class })
    }

    pub fn tp(&self) -> &FinMap {
        self.universe.tp()
    }
}

/// P_tp Ty, P_tp Tm and P_tp tp between them.
#[derive(Clone, Debug)]
pub struct PolyShape {
    pub ty_app: PolyApplication,
    pub tm_app: PolyApplication,
    pub p_tp: FinMap,
}

impl PolyShape {
    pub fn new(u: &Universe) -> Self {
        let ty_app = apply_poly_map(u.tp(), u.ty());
        let tm_app = apply_poly_map(u.tp(), u.tm());
        let p_tp = poly_map_between(&tm_app, &ty_app, u.tp()).expect("tp: Tm → Ty");
        PolyShape { ty_app, tm_app, p_tp }
    }
}

/// unit: 1 → Tm over Unit: 1 → Ty.
#[derive(Clone, Debug)]
pub struct AlgUnit {
    pub type_map: FinMap,
    pub term_map: FinMap,
    pub square_verified: bool,
}

impl AlgUnit {
    pub fn new(u: &Universe, type_map: FinMap, term_map: FinMap) -> Result<Self> {
        let mut out = AlgUnit { type_map, term_map, square_verified: false };
        out.square_verified = out.check(u)?;
        Ok(out)
    }

    pub fn square(&self, u: &Universe) -> Result<Square> {
        Square::new(self.term_map.clone(), FinMap::identity(&terminal()), u.tp().clone(), self.type_map.clone())
    }

    /// Err(NonCommuting) if the square does not commute, otherwise whether it is a pullback.
    pub fn check(&self, u: &Universe) -> Result<bool> {
        is_pullback(&self.square(u)?)
    }
}

/// Π: P_tp Ty → Ty and lam: P_tp Tm → Tm.
#[derive(Clone, Debug)]
pub struct AlgPi {
    pub shape: Arc<PolyShape>,
    pub pi_map: FinMap,
    pub lam_map: FinMap,
}

impl AlgPi {
    pub fn square(&self, u: &Universe) -> Result<Square> {
        Square::new(self.lam_map.clone(), self.shape.p_tp.clone(), u.tp().clone(), self.pi_map.clone())
    }

    pub fn check(&self, u: &Universe) -> Result<bool> {
        is_pullback(&self.square(u)?)
    }
}

/// Σ: P_tp Ty → Ty and pair: compDom → Tm, over tp ▷ tp.
#[derive(Clone, Debug)]
pub struct AlgSigma {
    pub comp: Arc<CompositeSignature>,
    pub sigma_map: FinMap,
    pub pair_map: FinMap,
}

impl AlgSigma {
    pub fn square(&self, u: &Universe) -> Result<Square> {
        Square::new(self.pair_map.clone(), self.comp.sig.clone(), u.tp().clone(), self.sigma_map.clone())
    }

    pub fn check(&self, u: &Universe) -> Result<bool> {
        is_pullback(&self.square(u)?)
    }
}

/// tp ▷ tp for a universe.
pub fn self_composite(u: &Universe) -> CompositeSignature {
    compose_maps(u.tp(), u.tp()).expect("tp composes with itself")
}

/// Cones (W, x: W → X, y: W → Y) of a square to chosen lifts W → P.
pub type Lifter = Arc<dyn Fn(&FinMap, &FinMap) -> Result<FinMap> + Send + Sync>;

#[derive(Clone)]
pub struct WeakPullbackStructure {
    pub square: Square,
    pub lifter: Lifter,
    pub coherent: bool,
}

impl std::fmt::Debug for WeakPullbackStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeakPullbackStructure").field("square", &self.square).field("coherent", &self.coherent).finish()
    }
}

impl WeakPullbackStructure {
    /// The unique lifts of a square that is already a pullback.
    pub fn from_pullback(square: Square) -> Result<Self> {
        if !is_pullback(&square)? {
            return Err(Error::SquareViolation("square is not a pullback".into()));
        }
        let sq = square.clone();
        Ok(WeakPullbackStructure { square, lifter: Arc::new(move |x, y| sq.lift(x, y)), coherent: true })
    }

    /// The chosen pullback of the cospan.
    pub fn strong_pullback(&self) -> Result<PullbackResult> {
        pullback(&self.square.right, &self.square.bottom)
    }

    /// l'_V := s_V ≫ l_S, where S is the strong pullback and s its unique lifts.
    pub fn coherentize(&self) -> Result<Self> {
        let strong = self.strong_pullback()?;
        let l_s = (self.lifter)(&strong.proj1, &strong.proj2)?;
        let lifter: Lifter = Arc::new(move |x, y| strong.mediate(x, y)?.compose(&l_s));
        Ok(WeakPullbackStructure { square: self.square.clone(), lifter, coherent: true })
    }
}

/// All cones with apex of size ≤ bound, as maps into the strong pullback.
fn cones(strong: &PullbackResult, bound: usize) -> Vec<FinMap> {
    objects_upto(bound).iter().flat_map(|w| all_maps(w, &strong.apex)).collect()
}

/// Lift validity for every cone, and coherence along every cone morphism, within bound.
pub fn check_weak_pullback(wp: &WeakPullbackStructure, bound: usize) -> Result<LawReport> {
    let strong = wp.strong_pullback()?;
    let mut valid = Verdict::new("weak.lift", "every chosen lift satisfies l ≫ g' = x and l ≫ f' = y");
    let mut coherent = Verdict::new("weak.coherent", "σ ≫ l_W = l_V for every cone morphism σ");
    for m in cones(&strong, bound) {
        let (x, y) = (m.compose(&strong.proj1)?, m.compose(&strong.proj2)?);
        let cone = || json!({ "x": x.to_json(), "y": y.to_json() });
        let lift = (wp.lifter)(&x, &y);
        let ok = match &lift {
            Ok(l) => l.compose(&wp.square.top).ok() == Some(x.clone()) && l.compose(&wp.square.left).ok() == Some(y.clone()),
            Err(_) => false,
        };
        valid.record(ok, cone);
        let Ok(l_w) = lift else { continue };
        for v in objects_upto(bound) {
            for sigma in all_maps(&v, m.dom()) {
                let l_v = (wp.lifter)(&sigma.compose(&x)?, &sigma.compose(&y)?);
                let ok = matches!(&l_v, Ok(l) if *l == sigma.compose(&l_w)?);
                coherent.record(ok, || json!({ "cone": cone(), "sigma": sigma.to_json() }));
            }
        }
    }
    let mut report = LawReport::new("weak-pullback", bound);
    report.push(valid);
    report.push(coherent);
    Ok(report)
}

/// The first cone whose lift is invalid, as an error.
pub fn require_valid_lifts(wp: &WeakPullbackStructure, bound: usize) -> Result<()> {
    let report = check_weak_pullback(wp, bound)?;
    match report.get("weak.lift") {
        Some(v) if !v.pass => Err(Error::LiftInvalid {
            cone: v.counterexample.as_ref().map(|c| c.to_string()).unwrap_or_default(),
        }),
        _ => Ok(()),
    }
}

/// The number of cones within bound on which two lifters agree, and the total.
pub fn lifter_agreement(a: &WeakPullbackStructure, b: &WeakPullbackStructure, bound: usize) -> Result<(usize, usize)> {
    let strong = a.strong_pullback()?;
    let mut agree = 0;
    let all = cones(&strong, bound);
    for m in &all {
        let (x, y) = (m.compose(&strong.proj1)?, m.compose(&strong.proj2)?);
        if (a.lifter)(&x, &y).ok() == (b.lifter)(&x, &y).ok() {
            agree += 1;
        }
    }
    Ok((agree, all.len()))
}

/// The parts of an Id structure determined by Id and refl.
#[derive(Clone, Debug)]
pub struct AlgIdSkeleton {
    pub universe: Universe,
    pub id_map: FinMap,
    pub refl_map: FinMap,
    /// Tm.tp, pairs (t, t') of terms of one type.
    pub tm_tp: ContextExtension,
    pub delta: FinMap,
    /// Tm.tp.Id.
    pub ext_id: ContextExtension,
    pub rho: FinMap,
    pub i_map: FinMap,
    pub i_ty_app: PolyApplication,
    pub i_tm_app: PolyApplication,
    /// Tm × Ty and Tm × Tm.
    pub tm_ty: PullbackResult,
    pub tm_tm: PullbackResult,
}

pub fn build_id_skeleton(u: &Universe, id_map: FinMap, refl_map: FinMap) -> Result<AlgIdSkeleton> {
    let tm_tp = u.context_extend(u.tp())?;
    let id_tm = FinMap::identity(u.tm());
    let delta = u.pair_sub(&tm_tp, &id_tm, &id_tm)?;
    if id_map.dom() != tm_tp.ext() || id_map.cod() != u.ty() {
        return Err(Error::CodomainMismatch { op: "build_id_skeleton", left: id_map.dom().len(), right: tm_tp.ext().len() });
    }
    let ext_id = u.context_extend(&id_map)?;
    let rho = u.pair_sub(&ext_id, &delta, &refl_map)?;
    let i_map = ext_id.display().compose(tm_tp.display())?;
    if !rho.compose(&i_map)?.is_identity() {
        return Err(Error::TriangleViolation { witness: u.tm().label(0).clone() });
    }
    let i_ty_app = apply_poly_map(&i_map, u.ty());
    let i_tm_app = apply_poly_map(&i_map, u.tm());
    let tm_ty = pullback(&bang(u.tm()), &bang(u.ty()))?;
    let tm_tm = pullback(&bang(u.tm()), &bang(u.tm()))?;
    Ok(AlgIdSkeleton { universe: u.clone(), id_map, refl_map, tm_tp, delta, ext_id, rho, i_map, i_ty_app, i_tm_app, tm_ty, tm_tm })
}

impl AlgIdSkeleton {
    /// (t, s) ∈ P_{id} X ↦ (t, s(t)) ∈ Tm × X, composed after v_X.
    fn v_component(&self, from: &PolyApplication, product: &PullbackResult) -> Result<FinMap> {
        let v = vertical_from_maps(&self.rho, &FinMap::identity(self.universe.tm()), &self.i_map)?;
        let to = apply_poly_map(&FinMap::identity(self.universe.tm()), &from.x);
        let vx = v.component_between(from, &to);
        let iso = FinMap::from_fn(&to.total, &product.apex, |p| {
            let t = to.fst_proj.apply(p);
            product.index_of(t, to.section(p)[0]).expect("product pair")
        });
        vx.compose(&iso)
    }

    /// The naturality square P_i Tm → Tm × Tm over P_i Ty → Tm × Ty.
    pub fn v_square(&self, class: &MapClass) -> Result<Square> {
        if !class.contains(&self.i_map) {
            return Err(Error::ClassViolation(format!("i is not in class {}", class.name())));
        }
        let top = self.v_component(&self.i_tm_app, &self.tm_tm)?;
        let bottom = self.v_component(&self.i_ty_app, &self.tm_ty)?;
        let left = poly_map_between(&self.i_tm_app, &self.i_ty_app, self.universe.tp())?;
        let right = FinMap::from_fn(&self.tm_tm.apex, &self.tm_ty.apex, |k| {
            let (t, t2) = self.tm_tm.pairs()[k];
            self.tm_ty.index_of(t, self.universe.tp().apply(t2)).expect("product pair")
        });
        Square::new(top, left, right, bottom)
    }

    /// The bijection Γ.(x:A).Id_A(a,x) → a ×_Tm i, ((γ, t'), p) ↦ (γ, ((a γ, t'), p)),
    /// given the extensions Γ.A and Γ.A.Id of an elementary context.
    pub fn dictionary(&self, a: &FinMap, ext_a: &ContextExtension, ext_id: &ContextExtension) -> Result<(PullbackResult, FinMap)> {
        let target = pullback(a, &self.i_map)?;
        let table = (0..ext_id.ext().len())
            .map(|e| {
                let (k, p) = ext_id.parts(e);
                let (g, t2) = ext_a.parts(k);
                let pair = self.tm_tp.index_of(a.apply(g), t2);
                let upper = pair.and_then(|pair| self.ext_id.index_of(pair, p));
                upper
                    .and_then(|upper| target.index_of(g, upper))
                    .ok_or_else(|| Error::SquareViolation(format!("no counterpart for {}", ext_id.ext().label(e))))
            })
            .collect::<Result<Vec<_>>>()?;
        let bij = FinMap::new(ext_id.ext().clone(), target.apex.clone(), table)?;
        if !bij.is_bijective() {
            return Err(Error::SquareViolation("Id context is not the pullback a ×_Tm i".into()));
        }
        Ok((target, bij))
    }
}

/// An algebraic Id structure: the skeleton plus a weak pullback structure on its v-square.
#[derive(Clone, Debug)]
pub struct AlgId {
    pub skeleton: Arc<AlgIdSkeleton>,
    pub weak: WeakPullbackStructure,
}

impl AlgId {
    /// Commutation of the refl square, ρ ≫ i = id, lift validity and (if claimed) coherence.
    pub fn check(&self, bound: usize) -> Result<LawReport> {
        let s = &self.skeleton;
        let mut report = LawReport::new("alg-id", bound);
        let mut refl = Verdict::new("id.refl-square", "refl ≫ tp = δ ≫ Id");
        refl.record(s.refl_map.compose(s.universe.tp())? == s.delta.compose(&s.id_map)?, || json!(null));
        report.push(refl);
        let mut tri = Verdict::new("id.triangle", "ρ ≫ i = id_Tm");
        tri.record(s.rho.compose(&s.i_map)?.is_identity(), || json!(null));
        report.push(tri);
        let wp = check_weak_pullback(&self.weak, bound)?;
        for v in wp.verdicts {
            if v.id == "weak.coherent" && !self.weak.coherent {
                continue;
            }
            report.push(v);
        }
        Ok(report)
    }
}

/// Fiber counts of a map, for comparing squares by hand-computed values.
pub fn fiber_counts(f: &FinMap) -> Vec<usize> {
    f.fiber_sizes()
}

/// Points ⋆ → X of a finite set.
pub fn points(x: &FinObj) -> Vec<FinMap> {
    (0..x.len()).map(|i| crate::finset::point(x, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::universe::{build_propositional_universe, TOP};

    #[test]
    fn propositional_shapes() {
        let u = build_propositional_universe();
        let shape = PolyShape::new(&u);
        assert_eq!(shape.ty_app.total.len(), 3);
        assert_eq!(shape.tm_app.total.len(), 2);
        assert_eq!(self_composite(&u).comp_dom.len(), 1);
        let top = u.ty().index_of(&Label::atom(TOP)).unwrap();
        let unit = AlgUnit::new(&u, FinMap::constant(&terminal(), u.ty(), top), FinMap::constant(&terminal(), u.tm(), 0)).unwrap();
        assert!(unit.square_verified);
    }

    #[test]
    fn id_skeleton() {
        let u = build_propositional_universe();
        let top = u.ty().index_of(&Label::atom(TOP)).unwrap();
        let tm_tp = u.context_extend(u.tp()).unwrap();
        let id_map = FinMap::constant(tm_tp.ext(), u.ty(), top);
        let s = build_id_skeleton(&u, id_map, FinMap::identity(u.tm())).unwrap();
        assert_eq!((s.tm_tp.ext().len(), s.ext_id.ext().len()), (1, 1));
        assert!(s.delta.compose(s.tm_tp.display()).unwrap().is_identity());
        assert!(s.delta.compose(s.tm_tp.var_map()).unwrap().is_identity());
        let sq = s.v_square(&u.principal_class()).unwrap();
        assert!(sq.check_commutes().is_ok());
        let wp = WeakPullbackStructure::from_pullback(sq).unwrap();
        let alg = AlgId { skeleton: Arc::new(s), weak: wp.coherentize().unwrap() };
        assert!(alg.check(2).unwrap().all_pass());

        let bot = 1 - top;
        let bad = FinMap::constant(tm_tp.ext(), u.ty(), bot);
        assert!(matches!(build_id_skeleton(&u, bad, FinMap::identity(u.tm())), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn broken_lifter_is_reported() {
        let u = build_propositional_universe();
        let top = u.ty().index_of(&Label::atom(TOP)).unwrap();
        let tm_tp = u.context_extend(u.tp()).unwrap();
        let s = build_id_skeleton(&u, FinMap::constant(tm_tp.ext(), u.ty(), top), FinMap::identity(u.tm())).unwrap();
        let sq = s.v_square(&u.principal_class()).unwrap();
        let p = sq.corner().clone();
        let broken = WeakPullbackStructure {
            square: sq,
            lifter: Arc::new(move |x: &FinMap, _y: &FinMap| Ok(FinMap::from_fn(x.dom(), &FinObj::canonical(p.len() + 1), |_| p.len())))
                as Lifter,
            coherent: false,
        };
        assert!(matches!(require_valid_lifts(&broken, 1), Err(Error::LiftInvalid { .. })));
    }
}
