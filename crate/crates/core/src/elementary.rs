//! Elementary type formers (Unit, Π, Σ, Id) on universes and their law suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::enumerate::{all_maps, objects_upto, slice_homs};
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinObj};
use crate::report::{LawReport, Verdict};
use crate::universe::{build_propositional_universe, ContextExtension, Universe, UniverseTower};

pub type TypeOnContext = Arc<dyn Fn(&FinObj) -> Result<FinMap> + Send + Sync>;
/// (Γ.A, B) ↦ a type over Γ.
pub type FormOp = Arc<dyn Fn(&ContextExtension, &FinMap) -> Result<FinMap> + Send + Sync>;
/// (Γ.A, B, term) ↦ term.
pub type TermOp = Arc<dyn Fn(&ContextExtension, &FinMap, &FinMap) -> Result<FinMap> + Send + Sync>;
/// (Γ.A, B, a, b) ↦ pair(a, b).
pub type PairOp = Arc<dyn Fn(&ContextExtension, &FinMap, &FinMap, &FinMap) -> Result<FinMap> + Send + Sync>;
/// (A, a₀, a₁) ↦ Id_A(a₀, a₁).
pub type IdFormOp = Arc<dyn Fn(&FinMap, &FinMap, &FinMap) -> Result<FinMap> + Send + Sync>;
/// (A, a) ↦ refl a.
pub type ReflOp = Arc<dyn Fn(&FinMap, &FinMap) -> Result<FinMap> + Send + Sync>;
/// (Γ.(x:A).Id_A(a,x), C, c_refl) ↦ j(C, c_refl).
pub type JOp = Arc<dyn Fn(&IdContext, &FinMap, &FinMap) -> Result<FinMap> + Send + Sync>;

#[derive(Clone)]
pub struct ElemUnit {
    pub universe: Universe,
    pub unit_type: TypeOnContext,
    pub unit_term: TypeOnContext,
}

/// Π with A in `dom`, B in `fam` and Π_A B in `result`; a single-universe
/// structure has all three equal.
#[derive(Clone)]
pub struct ElemPi {
    pub dom: Universe,
    pub fam: Universe,
    pub result: Universe,
    pub form: FormOp,
    pub lam: TermOp,
    pub unlam: TermOp,
}

#[derive(Clone)]
pub struct ElemSigma {
    pub dom: Universe,
    pub fam: Universe,
    pub result: Universe,
    pub form: FormOp,
    pub pair: PairOp,
    pub fst: TermOp,
    pub snd: TermOp,
}

#[derive(Clone)]
pub struct ElemId {
    pub universe: Universe,
    pub form: IdFormOp,
    pub refl: ReflOp,
    pub j: JOp,
    /// Whether j is claimed to be stable under substitution.
    pub j_stable: bool,
}

/// Γ.(x : A).Id_A(a, x) with ρ_a = id.a.refl a.
#[derive(Clone, Debug)]
pub struct IdContext {
    pub a_type: FinMap,
    pub a: FinMap,
    pub ext_a: ContextExtension,
    pub id_family: FinMap,
    pub ext_id: ContextExtension,
    pub rho: FinMap,
}

pub fn id_context(id: &ElemId, a_type: &FinMap, a: &FinMap) -> Result<IdContext> {
    let u = &id.universe;
    let ext_a = u.context_extend(a_type)?;
    let weakened_type = ext_a.display().compose(a_type)?;
    let weakened_a = ext_a.display().compose(a)?;
    let id_family = (id.form)(&weakened_type, &weakened_a, ext_a.var_map())?;
    let ext_id = u.context_extend(&id_family)?;
    let to_a = u.pair_sub(&ext_a, &FinMap::identity(a_type.dom()), a)?;
    let refl = (id.refl)(a_type, a)?;
    let rho = u.pair_sub(&ext_id, &to_a, &refl)?;
    Ok(IdContext { a_type: a_type.clone(), a: a.clone(), ext_a, id_family, ext_id, rho })
}

/// σ̃: Δ.(σ ≫ A) → Γ.A, (δ, t) ↦ (σ δ, t).
pub fn weaken(u: &Universe, sigma: &FinMap, a_type: &FinMap) -> Result<FinMap> {
    let ext = u.context_extend(a_type)?;
    Ok(u.weaken(sigma, &ext)?.1)
}

/// A universe with its fibers indexed, and a chosen type for each fiber size.
#[derive(Clone, Debug)]
pub struct FiberIndex {
    pub universe: Universe,
    fibers: Vec<Vec<usize>>,
    pos: Vec<usize>,
    code_by_size: BTreeMap<usize, usize>,
}

impl FiberIndex {
    pub fn new(universe: Universe) -> Self {
        let fibers = universe.tp().fibers();
        let mut pos = vec![0; universe.tm().len()];
        let mut code_by_size = BTreeMap::new();
        for (c, fiber) in fibers.iter().enumerate() {
            code_by_size.entry(fiber.len()).or_insert(c);
            for (k, &t) in fiber.iter().enumerate() {
                pos[t] = k;
            }
        }
        FiberIndex { universe, fibers, pos, code_by_size }
    }

    pub fn size(&self, ty: usize) -> usize {
        self.fibers[ty].len()
    }

    pub fn term(&self, ty: usize, i: usize) -> usize {
        self.fibers[ty][i]
    }

    pub fn position(&self, tm: usize) -> usize {
        self.pos[tm]
    }

    /// The position of `tm` in the fiber over `ty`, or a type error naming `at`.
    pub fn position_over(&self, tm: usize, ty: usize, at: &FinObj, g: usize) -> Result<usize> {
        if self.universe.tp().apply(tm) != ty {
            return Err(Error::TypeMismatch { witness: at.label(g).clone() });
        }
        Ok(self.pos[tm])
    }

    pub fn code_of(&self, n: usize) -> Result<usize> {
        self.code_by_size
            .get(&n)
            .copied()
            .ok_or_else(|| Error::BoundsTooTight(format!("no type with {n} terms in this universe")))
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.code_by_size.keys().copied()
    }
}

/// Elements of Γ.A grouped by γ, each group in fiber order.
fn groups(ext: &ContextExtension) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); ext.context().len()];
    for (i, &(g, _)) in ext.pullback.pairs().iter().enumerate() {
        out[g].push(i);
    }
    out
}

fn map_on(dom: &FinObj, cod: &FinObj, f: impl Fn(usize) -> Result<usize>) -> Result<FinMap> {
    let table = (0..dom.len()).map(f).collect::<Result<Vec<_>>>()?;
    FinMap::new(dom.clone(), cod.clone(), table)
}

/// Unit as the type with exactly one term.
pub fn counting_unit(u: &Arc<FiberIndex>) -> ElemUnit {
    let (ut, um) = (u.clone(), u.clone());
    ElemUnit {
        universe: u.universe.clone(),
        unit_type: Arc::new(move |g| Ok(FinMap::constant(g, ut.universe.ty(), ut.code_of(1)?))),
        unit_term: Arc::new(move |g| {
            let c = um.code_of(1)?;
            Ok(FinMap::constant(g, um.universe.tm(), um.term(c, 0)))
        }),
    }
}

/// Π as the product of fiber sizes; lam and unlam are currying on section
/// graphs, encoded in mixed radix with the first fiber element most significant.
pub fn counting_pi(dom: &Arc<FiberIndex>, fam: &Arc<FiberIndex>, result: &Arc<FiberIndex>) -> ElemPi {
    let form = {
        let (fam, res) = (fam.clone(), result.clone());
        Arc::new(move |ext: &ContextExtension, b: &FinMap| {
            let gs = groups(ext);
            map_on(ext.context(), res.universe.ty(), |g| {
                res.code_of(gs[g].iter().map(|&i| fam.size(b.apply(i))).product())
            })
        })
    };
    let lam = {
        let (fam, res) = (fam.clone(), result.clone());
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, b: &FinMap| {
            let gs = groups(ext);
            map_on(ext.context(), res.universe.tm(), |g| {
                let mut idx = 0;
                let mut n = 1;
                for &i in &gs[g] {
                    let radix = fam.size(b_ty.apply(i));
                    idx = idx * radix + fam.position_over(b.apply(i), b_ty.apply(i), ext.ext(), i)?;
                    n *= radix;
                }
                Ok(res.term(res.code_of(n)?, idx))
            })
        })
    };
    let unlam = {
        let (fam, res) = (fam.clone(), result.clone());
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, f: &FinMap| {
            let gs = groups(ext);
            let mut table = vec![0; ext.ext().len()];
            for (g, group) in gs.iter().enumerate() {
                let n = group.iter().map(|&i| fam.size(b_ty.apply(i))).product();
                let mut idx = res.position_over(f.apply(g), res.code_of(n)?, ext.context(), g)?;
                for &i in group.iter().rev() {
                    let radix = fam.size(b_ty.apply(i));
                    table[i] = fam.term(b_ty.apply(i), idx % radix);
                    idx /= radix;
                }
            }
            FinMap::new(ext.ext().clone(), fam.universe.tm().clone(), table)
        })
    };
    ElemPi {
        dom: dom.universe.clone(),
        fam: fam.universe.clone(),
        result: result.universe.clone(),
        form,
        lam,
        unlam,
    }
}

/// Σ as the sum of fiber sizes; pair(a, b) is the offset of a's block plus b's position.
pub fn counting_sigma(dom: &Arc<FiberIndex>, fam: &Arc<FiberIndex>, result: &Arc<FiberIndex>) -> ElemSigma {
    let form = {
        let (fam, res) = (fam.clone(), result.clone());
        Arc::new(move |ext: &ContextExtension, b: &FinMap| {
            let gs = groups(ext);
            map_on(ext.context(), res.universe.ty(), |g| {
                res.code_of(gs[g].iter().map(|&i| fam.size(b.apply(i))).sum())
            })
        })
    };
    let pair = {
        let (fam, res) = (fam.clone(), result.clone());
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, a: &FinMap, b: &FinMap| {
            let gs = groups(ext);
            map_on(ext.context(), res.universe.tm(), |g| {
                let target = ext
                    .index_of(g, a.apply(g))
                    .ok_or_else(|| Error::TypeMismatch { witness: ext.context().label(g).clone() })?;
                let mut offset = 0;
                let mut total = 0;
                for &i in &gs[g] {
                    if i < target {
                        offset += fam.size(b_ty.apply(i));
                    }
                    total += fam.size(b_ty.apply(i));
                }
                let inner = fam.position_over(b.apply(g), b_ty.apply(target), ext.context(), g)?;
                Ok(res.term(res.code_of(total)?, offset + inner))
            })
        })
    };
    // Locates the block of s(γ): returns (element of Γ.A, position within its B-fiber).
    let split = {
        let (fam, res) = (fam.clone(), result.clone());
        move |ext: &ContextExtension, b_ty: &FinMap, s: &FinMap, g: usize, gs: &[Vec<usize>]| -> Result<(usize, usize)> {
            let total = gs[g].iter().map(|&i| fam.size(b_ty.apply(i))).sum();
            let mut idx = res.position_over(s.apply(g), res.code_of(total)?, ext.context(), g)?;
            for &i in &gs[g] {
                let n = fam.size(b_ty.apply(i));
                if idx < n {
                    return Ok((i, idx));
                }
                idx -= n;
            }
            Err(Error::TypeMismatch { witness: ext.context().label(g).clone() })
        }
    };
    let fst = {
        let (dom, split) = (dom.clone(), split.clone());
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, s: &FinMap| {
            let gs = groups(ext);
            map_on(ext.context(), dom.universe.tm(), |g| Ok(ext.parts(split(ext, b_ty, s, g, &gs)?.0).1))
        })
    };
    let snd = {
        let fam = fam.clone();
        Arc::new(move |ext: &ContextExtension, b_ty: &FinMap, s: &FinMap| {
            let gs = groups(ext);
            map_on(ext.context(), fam.universe.tm(), |g| {
                let (i, k) = split(ext, b_ty, s, g, &gs)?;
                Ok(fam.term(b_ty.apply(i), k))
            })
        })
    };
    ElemSigma {
        dom: dom.universe.clone(),
        fam: fam.universe.clone(),
        result: result.universe.clone(),
        form,
        pair,
        fst,
        snd,
    }
}

/// Discrete identity types: Id_A(a₀, a₁) has one term when a₀ = a₁ and none otherwise.
pub fn counting_id(u: &Arc<FiberIndex>) -> ElemId {
    let form = {
        let u = u.clone();
        Arc::new(move |a_type: &FinMap, a0: &FinMap, a1: &FinMap| {
            map_on(a_type.dom(), u.universe.ty(), |g| u.code_of(usize::from(a0.apply(g) == a1.apply(g))))
        })
    };
    let refl = {
        let u = u.clone();
        Arc::new(move |a_type: &FinMap, _a: &FinMap| {
            let c = u.code_of(1)?;
            Ok(FinMap::constant(a_type.dom(), u.universe.tm(), u.term(c, 0)))
        })
    };
    let j = {
        let u = u.clone();
        Arc::new(move |ctx: &IdContext, _c_ty: &FinMap, c: &FinMap| {
            map_on(ctx.ext_id.ext(), u.universe.tm(), |e| {
                let (i, _) = ctx.ext_id.parts(e);
                Ok(c.apply(ctx.ext_a.parts(i).0))
            })
        })
    };
    ElemId { universe: u.universe.clone(), form, refl, j, j_stable: true }
}

/// The four formers on a single universe.
#[derive(Clone)]
pub struct ElemStructures {
    pub unit: ElemUnit,
    pub pi: ElemPi,
    pub sigma: ElemSigma,
    pub id: ElemId,
}

/// The formers on the universe ⊤/⊥: every operation is the unique well-typed map.
pub fn propositional_elementary() -> ElemStructures {
    let u = Arc::new(FiberIndex::new(build_propositional_universe()));
    ElemStructures {
        unit: counting_unit(&u),
        pi: counting_pi(&u, &u, &u),
        sigma: counting_sigma(&u, &u, &u),
        id: counting_id(&u),
    }
}

/// Π and Σ with A and B at `low` and the former landing at `high`.
pub fn heterogeneous_pi_sigma(tower: &UniverseTower, low: usize, high: usize) -> Result<(ElemPi, ElemSigma)> {
    let (Some(&k_low), Some(&k_high)) = (tower.bounds.get(low), tower.bounds.get(high)) else {
        return Err(Error::BoundsTooTight(format!("tower has no levels {low} and {high}")));
    };
    let pi_need = k_low.checked_pow(k_low as u32).unwrap_or(usize::MAX);
    if k_high < pi_need || k_high < k_low * k_low {
        return Err(Error::BoundsTooTight(format!(
            "level bound {k_high} cannot hold products and sums over level bound {k_low}"
        )));
    }
    let lo = Arc::new(FiberIndex::new(tower.levels[low].clone()));
    let hi = Arc::new(FiberIndex::new(tower.levels[high].clone()));
    Ok((counting_pi(&lo, &lo, &hi), counting_sigma(&lo, &lo, &hi)))
}

/// Replaces lam by the first term of the right type, so β/η break wherever Π has more than one term.
pub fn mutate_constant_lam(pi: &ElemPi) -> ElemPi {
    let form = pi.form.clone();
    let result = FiberIndex::new(pi.result.clone());
    let mut out = pi.clone();
    out.lam = Arc::new(move |ext, b_ty, _b| {
        let ty = form(ext, b_ty)?;
        map_on(ext.context(), result.universe.tm(), |g| {
            let c = ty.apply(g);
            if result.size(c) == 0 {
                return Err(Error::TypeMismatch { witness: ext.context().label(g).clone() });
            }
            Ok(result.term(c, 0))
        })
    });
    out
}

/// Exchanges fst and snd.
pub fn mutate_swap_projections(sigma: &ElemSigma) -> ElemSigma {
    let mut out = sigma.clone();
    out.fst = sigma.snd.clone();
    out.snd = sigma.fst.clone();
    out
}

pub const UNIT_CLAUSES: &[(&str, &str)] = &[
    ("unit.1", "Unit_Γ is a type in context Γ"),
    ("unit.2", "σ ≫ Unit_Γ = Unit_Δ"),
    ("unit.3", "unit_Γ is the unique term of Unit_Γ"),
    ("lemma.unit-stable", "σ ≫ unit_Γ = unit_Δ"),
];

pub const PI_CLAUSES: &[(&str, &str)] = &[
    ("pi.1", "Π_A B is a type in context Γ"),
    ("pi.2", "Π_{σ≫A}(σ̃ ≫ B) = σ ≫ Π_A B"),
    ("pi.3", "lam b ≫ tp = Π_A B"),
    ("pi.4", "lam(σ̃ ≫ b) = σ ≫ lam b"),
    ("pi.5", "unlam f ≫ tp = B"),
    ("pi.6", "unlam(lam b) = b and lam(unlam f) = f"),
    ("lemma.unlam-stable", "unlam(σ ≫ f) = σ̃ ≫ unlam f"),
    ("lemma.unlam-stable.derived", "unlam stability re-derived from lam stability and β/η"),
    ("lemma.substituted-lam", "lam and unlam biject squares over σ̃ with squares over σ"),
];

pub const SIGMA_CLAUSES: &[(&str, &str)] = &[
    ("sigma.1", "Σ_A B is a type in context Γ"),
    ("sigma.2", "Σ_{σ≫A}(σ̃ ≫ B) = σ ≫ Σ_A B"),
    ("sigma.3", "pair(a, b) ≫ tp = Σ_A B"),
    ("sigma.4", "pair(σ ≫ a, σ ≫ b) = σ ≫ pair(a, b)"),
    ("sigma.5", "fst s ≫ tp = A and snd s ≫ tp = (id.fst s) ≫ B"),
    ("sigma.6", "fst(pair(a, b)) = a and snd(pair(a, b)) = b"),
    ("sigma.7", "pair(fst s, snd s) = s"),
    ("lemma.fst-snd-stable", "fst(σ ≫ s) = σ ≫ fst s and snd(σ ≫ s) = σ ≫ snd s"),
    ("lemma.fst-snd-stable.derived", "fst/snd stability re-derived from pair stability and β/η"),
    ("lemma.substituted-pair", "pair and (fst, snd) biject pairs of squares over σ with squares over σ"),
];

pub const ID_CLAUSES: &[(&str, &str)] = &[
    ("id.1", "Id_A(a₀, a₁) is a type in context Γ"),
    ("id.2", "σ ≫ Id_A(a₀, a₁) = Id_{σ≫A}(σ ≫ a₀, σ ≫ a₁)"),
    ("id.3", "refl a ≫ tp = Id_A(a, a)"),
    ("id.4", "σ ≫ refl a = refl(σ ≫ a)"),
    ("id.5", "j ≫ tp = C and ρ_a ≫ j(C, c) = c"),
    ("id.6", "j is stable under substitution"),
];

/// Per-clause verdicts in a fixed order, mergeable across parallel jobs.
#[derive(Clone, Debug)]
struct Tally(Vec<Verdict>);

impl Tally {
    fn new(clauses: &[(&str, &str)]) -> Self {
        Tally(clauses.iter().map(|(id, d)| Verdict::new(*id, *d)).collect())
    }

    fn at(&mut self, id: &str) -> &mut Verdict {
        self.0.iter_mut().find(|v| v.id == id).expect("known clause")
    }

    fn record(&mut self, id: &str, ok: bool, witness: impl FnOnce() -> Value) {
        self.at(id).record(ok, witness)
    }

    /// Records a check whose computation may itself fail; errors count as failures.
    fn check(&mut self, id: &str, outcome: Result<bool>, witness: impl FnOnce() -> Value) {
        match outcome {
            Ok(ok) => self.record(id, ok, witness),
            Err(e) => self.record(id, false, || json!({ "error": e.to_string(), "at": witness() })),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            a.merge(b);
        }
        self
    }

    fn into_report(self, subject: &str, bound: usize) -> LawReport {
        let mut r = LawReport::new(subject, bound);
        for v in self.0 {
            r.push(v);
        }
        r
    }
}

fn run_jobs<J: Sync>(clauses: &[(&str, &str)], jobs: &[J], work: impl Fn(&J, &mut Tally) + Sync) -> Tally {
    let parts: Vec<Tally> = jobs
        .par_iter()
        .map(|job| {
            let mut t = Tally::new(clauses);
            work(job, &mut t);
            t
        })
        .collect();
    parts.into_iter().fold(Tally::new(clauses), Tally::merge)
}

fn types_over(u: &Universe, bound: usize) -> Vec<FinMap> {
    objects_upto(bound).iter().flat_map(|g| all_maps(g, u.ty())).collect()
}

fn substitutions_into(gamma: &FinObj, bound: usize) -> Vec<FinMap> {
    objects_upto(bound).iter().flat_map(|d| all_maps(d, gamma)).collect()
}

fn terms(u: &Universe, ty: &FinMap) -> Vec<FinMap> {
    slice_homs(ty, u.tp()).collect()
}

fn is_type(u: &Universe, gamma: &FinObj, m: &FinMap) -> bool {
    m.dom() == gamma && m.cod() == u.ty()
}

fn eq(a: Result<FinMap>, b: Result<FinMap>) -> Result<bool> {
    Ok(a? == b?)
}

fn types_as(u: &Universe, term: &FinMap, ty: &FinMap) -> Result<bool> {
    Ok(term.cod() == u.tm() && term.compose(u.tp())? == *ty)
}

pub fn check_elem_unit(unit: &ElemUnit, bound: usize) -> LawReport {
    let u = &unit.universe;
    let contexts = objects_upto(bound);
    let tally = run_jobs(UNIT_CLAUSES, &contexts, |gamma, t| {
        let w = || json!({ "context": gamma.to_json() });
        let ty = (unit.unit_type)(gamma);
        t.check("unit.1", ty.as_ref().map(|m| is_type(u, gamma, m)).map_err(clone_err), w);
        let Ok(ty) = ty else { return };
        let unique = terms(u, &ty);
        let term = (unit.unit_term)(gamma);
        t.check(
            "unit.3",
            term.as_ref().map(|m| unique.len() == 1 && unique[0] == *m).map_err(clone_err),
            w,
        );
        for sigma in substitutions_into(gamma, bound) {
            let ws = || json!({ "context": gamma.to_json(), "sigma": sigma.to_json() });
            let delta = sigma.dom();
            t.check("unit.2", eq(sigma.compose(&ty), (unit.unit_type)(delta)), ws);
            if let Ok(term) = &term {
                t.check("lemma.unit-stable", eq(sigma.compose(term), (unit.unit_term)(delta)), ws);
            }
        }
    });
    tally.into_report("unit", bound)
}

fn clone_err(e: &Error) -> Error {
    Error::LawViolation(e.to_string())
}

/// One (Γ, A) instance of the Π and Σ suites.
struct FamilyJob {
    ext: ContextExtension,
}

fn family_jobs(dom: &Universe, bound: usize) -> Vec<FamilyJob> {
    types_over(dom, bound)
        .into_iter()
        .map(|a| FamilyJob { ext: dom.context_extend(&a).expect("A lands in Ty") })
        .collect()
}

fn family_witness(ext: &ContextExtension, b: &FinMap) -> Value {
    json!({ "A": ext.a.to_json(), "B": b.to_json() })
}

pub fn check_elem_pi(pi: &ElemPi, bound: usize) -> LawReport {
    let jobs = family_jobs(&pi.dom, bound);
    let tally = run_jobs(PI_CLAUSES, &jobs, |job, t| {
        let ext = &job.ext;
        let gamma = ext.context();
        for b_ty in all_maps(ext.ext(), pi.fam.ty()) {
            let w = || family_witness(ext, &b_ty);
            let form = (pi.form)(ext, &b_ty);
            t.check("pi.1", form.as_ref().map(|m| is_type(&pi.result, gamma, m)).map_err(clone_err), w);
            let Ok(form) = form else { continue };
            let bodies = terms(&pi.fam, &b_ty);
            let funs = terms(&pi.result, &form);
            for b in &bodies {
                let wb = || json!({ "family": w(), "b": b.to_json() });
                let lam = (pi.lam)(ext, &b_ty, b);
                t.check("pi.3", lam.as_ref().map_err(clone_err).and_then(|l| types_as(&pi.result, l, &form)), wb);
                if let Ok(l) = &lam {
                    t.check("pi.6", eq((pi.unlam)(ext, &b_ty, l), Ok(b.clone())), wb);
                }
            }
            for f in &funs {
                let wf = || json!({ "family": w(), "f": f.to_json() });
                let un = (pi.unlam)(ext, &b_ty, f);
                t.check("pi.5", un.as_ref().map_err(clone_err).and_then(|x| types_as(&pi.fam, x, &b_ty)), wf);
                if let Ok(x) = &un {
                    t.check("pi.6", eq((pi.lam)(ext, &b_ty, x), Ok(f.clone())), wf);
                }
            }
            for sigma in substitutions_into(gamma, bound) {
                let ws = || json!({ "family": w(), "sigma": sigma.to_json() });
                let (sub, st) = match pi.dom.weaken(&sigma, ext) {
                    Ok(x) => x,
                    Err(e) => {
                        t.check("pi.2", Err(e), ws);
                        continue;
                    }
                };
                let Ok(b_sub) = st.compose(&b_ty) else { continue };
                let form_sub = (pi.form)(&sub, &b_sub);
                t.check("pi.2", eq(form_sub.as_ref().map(Clone::clone).map_err(clone_err), sigma.compose(&form)), ws);
                for b in &bodies {
                    let lhs = st.compose(b).and_then(|sb| (pi.lam)(&sub, &b_sub, &sb));
                    let rhs = (pi.lam)(ext, &b_ty, b).and_then(|l| sigma.compose(&l));
                    t.check("pi.4", eq(lhs, rhs), || json!({ "at": ws(), "b": b.to_json() }));
                }
                for f in &funs {
                    let wf = || json!({ "at": ws(), "f": f.to_json() });
                    let direct = eq(
                        sigma.compose(f).and_then(|sf| (pi.unlam)(&sub, &b_sub, &sf)),
                        (pi.unlam)(ext, &b_ty, f).and_then(|x| st.compose(&x)),
                    );
                    t.check("lemma.unlam-stable", direct, wf);
                    t.check("lemma.unlam-stable.derived", unlam_chain(pi, ext, &b_ty, &sub, &b_sub, &sigma, &st, f), wf);
                }
                if let Ok(form_sub) = &form_sub {
                    t.check("lemma.substituted-lam", substituted_lam(pi, &sub, &b_sub, form_sub, &sigma, &form), ws);
                }
            }
        }
    });
    tally.into_report("pi", bound)
}

/// unlam(σ ≫ f) = unlam(σ ≫ lam(unlam f)) = unlam(lam(σ̃ ≫ unlam f)) = σ̃ ≫ unlam f.
#[allow(clippy::too_many_arguments)]
fn unlam_chain(
    pi: &ElemPi,
    ext: &ContextExtension,
    b_ty: &FinMap,
    sub: &ContextExtension,
    b_sub: &FinMap,
    sigma: &FinMap,
    st: &FinMap,
    f: &FinMap,
) -> Result<bool> {
    let un = (pi.unlam)(ext, b_ty, f)?;
    let eta = (pi.lam)(ext, b_ty, &un)? == *f;
    let moved = st.compose(&un)?;
    let relam = (pi.lam)(sub, b_sub, &moved)?;
    let stable = sigma.compose(&(pi.lam)(ext, b_ty, &un)?)? == relam;
    let beta = (pi.unlam)(sub, b_sub, &relam)? == moved;
    Ok(eta && stable && beta)
}

fn substituted_lam(
    pi: &ElemPi,
    sub: &ContextExtension,
    b_sub: &FinMap,
    form_sub: &FinMap,
    sigma: &FinMap,
    form: &FinMap,
) -> Result<bool> {
    let target = sigma.compose(form)?;
    let bodies = terms(&pi.fam, b_sub);
    let funs = terms(&pi.result, &target);
    if bodies.len() != funs.len() || *form_sub != target {
        return Ok(false);
    }
    for b in &bodies {
        let l = (pi.lam)(sub, b_sub, b)?;
        if !types_as(&pi.result, &l, &target)? || (pi.unlam)(sub, b_sub, &l)? != *b {
            return Ok(false);
        }
    }
    for f in &funs {
        let x = (pi.unlam)(sub, b_sub, f)?;
        if !types_as(&pi.fam, &x, b_sub)? || (pi.lam)(sub, b_sub, &x)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The pairs (a, b) with a: A and b: (id.a) ≫ B over the context of `ext`.
fn sigma_inputs(s: &ElemSigma, ext: &ContextExtension, b_ty: &FinMap) -> Result<Vec<(FinMap, FinMap)>> {
    let gamma = ext.context();
    let mut out = Vec::new();
    for a in terms(&s.dom, &ext.a) {
        let at = s.dom.pair_sub(ext, &FinMap::identity(gamma), &a)?;
        for b in terms(&s.fam, &at.compose(b_ty)?) {
            out.push((a.clone(), b));
        }
    }
    Ok(out)
}

pub fn check_elem_sigma(s: &ElemSigma, bound: usize) -> LawReport {
    let jobs = family_jobs(&s.dom, bound);
    let tally = run_jobs(SIGMA_CLAUSES, &jobs, |job, t| {
        let ext = &job.ext;
        let gamma = ext.context();
        for b_ty in all_maps(ext.ext(), s.fam.ty()) {
            let w = || family_witness(ext, &b_ty);
            let form = (s.form)(ext, &b_ty);
            t.check("sigma.1", form.as_ref().map(|m| is_type(&s.result, gamma, m)).map_err(clone_err), w);
            let Ok(form) = form else { continue };
            let Ok(inputs) = sigma_inputs(s, ext, &b_ty) else { continue };
            let packed = terms(&s.result, &form);
            for (a, b) in &inputs {
                let wp = || json!({ "family": w(), "a": a.to_json(), "b": b.to_json() });
                let p = (s.pair)(ext, &b_ty, a, b);
                t.check("sigma.3", p.as_ref().map_err(clone_err).and_then(|p| types_as(&s.result, p, &form)), wp);
                if let Ok(p) = &p {
                    let beta = eq((s.fst)(ext, &b_ty, p), Ok(a.clone()))
                        .and_then(|x| Ok(x && (s.snd)(ext, &b_ty, p)? == *b));
                    t.check("sigma.6", beta, wp);
                }
            }
            for p in &packed {
                let wq = || json!({ "family": w(), "s": p.to_json() });
                t.check("sigma.5", projections_typed(s, ext, &b_ty, p), wq);
                let eta = (s.fst)(ext, &b_ty, p)
                    .and_then(|x| Ok((x, (s.snd)(ext, &b_ty, p)?)))
                    .and_then(|(x, y)| (s.pair)(ext, &b_ty, &x, &y));
                t.check("sigma.7", eq(eta, Ok(p.clone())), wq);
            }
            for sigma in substitutions_into(gamma, bound) {
                let ws = || json!({ "family": w(), "sigma": sigma.to_json() });
                let Ok((sub, st)) = s.dom.weaken(&sigma, ext) else { continue };
                let Ok(b_sub) = st.compose(&b_ty) else { continue };
                let form_sub = (s.form)(&sub, &b_sub);
                t.check("sigma.2", eq(form_sub.as_ref().map(Clone::clone).map_err(clone_err), sigma.compose(&form)), ws);
                for (a, b) in &inputs {
                    let lhs = (|| (s.pair)(&sub, &b_sub, &sigma.compose(a)?, &sigma.compose(b)?))();
                    let rhs = (s.pair)(ext, &b_ty, a, b).and_then(|p| sigma.compose(&p));
                    t.check("sigma.4", eq(lhs, rhs), || json!({ "at": ws(), "a": a.to_json(), "b": b.to_json() }));
                }
                for p in &packed {
                    let wq = || json!({ "at": ws(), "s": p.to_json() });
                    let direct = (|| {
                        let moved = sigma.compose(p)?;
                        Ok((s.fst)(&sub, &b_sub, &moved)? == sigma.compose(&(s.fst)(ext, &b_ty, p)?)?
                            && (s.snd)(&sub, &b_sub, &moved)? == sigma.compose(&(s.snd)(ext, &b_ty, p)?)?)
                    })();
                    t.check("lemma.fst-snd-stable", direct, wq);
                    t.check("lemma.fst-snd-stable.derived", projection_chain(s, ext, &b_ty, &sub, &b_sub, &sigma, p), wq);
                }
                if let Ok(form_sub) = &form_sub {
                    t.check("lemma.substituted-pair", substituted_pair(s, &sub, &b_sub, form_sub, &sigma, &form), ws);
                }
            }
        }
    });
    tally.into_report("sigma", bound)
}

fn projections_typed(s: &ElemSigma, ext: &ContextExtension, b_ty: &FinMap, p: &FinMap) -> Result<bool> {
    let a = (s.fst)(ext, b_ty, p)?;
    if !types_as(&s.dom, &a, &ext.a)? {
        return Ok(false);
    }
    let at = s.dom.pair_sub(ext, &FinMap::identity(ext.context()), &a)?;
    types_as(&s.fam, &(s.snd)(ext, b_ty, p)?, &at.compose(b_ty)?)
}

/// fst(σ ≫ s) = fst(σ ≫ pair(fst s, snd s)) = fst(pair(σ ≫ fst s, σ ≫ snd s)) = σ ≫ fst s, and likewise for snd.
fn projection_chain(
    s: &ElemSigma,
    ext: &ContextExtension,
    b_ty: &FinMap,
    sub: &ContextExtension,
    b_sub: &FinMap,
    sigma: &FinMap,
    p: &FinMap,
) -> Result<bool> {
    let (a, b) = ((s.fst)(ext, b_ty, p)?, (s.snd)(ext, b_ty, p)?);
    let eta = (s.pair)(ext, b_ty, &a, &b)? == *p;
    let (sa, sb) = (sigma.compose(&a)?, sigma.compose(&b)?);
    let repaired = (s.pair)(sub, b_sub, &sa, &sb)?;
    let stable = repaired == sigma.compose(p)?;
    let beta = (s.fst)(sub, b_sub, &repaired)? == sa && (s.snd)(sub, b_sub, &repaired)? == sb;
    Ok(eta && stable && beta)
}

fn substituted_pair(
    s: &ElemSigma,
    sub: &ContextExtension,
    b_sub: &FinMap,
    form_sub: &FinMap,
    sigma: &FinMap,
    form: &FinMap,
) -> Result<bool> {
    let target = sigma.compose(form)?;
    let inputs = sigma_inputs(s, sub, b_sub)?;
    let packed = terms(&s.result, &target);
    if inputs.len() != packed.len() || *form_sub != target {
        return Ok(false);
    }
    for (a, b) in &inputs {
        let p = (s.pair)(sub, b_sub, a, b)?;
        if !types_as(&s.result, &p, &target)? || (s.fst)(sub, b_sub, &p)? != *a || (s.snd)(sub, b_sub, &p)? != *b {
            return Ok(false);
        }
    }
    for p in &packed {
        if !projections_typed(s, sub, b_sub, p)? {
            return Ok(false);
        }
        let (a, b) = ((s.fst)(sub, b_sub, p)?, (s.snd)(sub, b_sub, p)?);
        if (s.pair)(sub, b_sub, &a, &b)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The substitution Δ.(σ≫A).Id → Γ.A.Id induced by σ, along with the context at Δ.
pub fn id_substitution(id: &ElemId, ctx: &IdContext, sigma: &FinMap) -> Result<(IdContext, FinMap)> {
    let u = &id.universe;
    let moved = id_context(id, &sigma.compose(&ctx.a_type)?, &sigma.compose(&ctx.a)?)?;
    let (_, st) = u.weaken(sigma, &ctx.ext_a)?;
    if moved.ext_a.ext() != st.dom() {
        return Err(Error::LawViolation("weakened context differs from the chosen one".into()));
    }
    let upper = u.pair_sub(&ctx.ext_id, &moved.ext_id.display().compose(&st)?, moved.ext_id.var_map())?;
    Ok((moved, upper))
}

pub fn check_elem_id(id: &ElemId, bound: usize) -> LawReport {
    let u = &id.universe;
    let clauses: Vec<(&str, &str)> =
        ID_CLAUSES.iter().copied().filter(|(c, _)| id.j_stable || *c != "id.6").collect();
    let jobs = types_over(u, bound);
    let tally = run_jobs(&clauses, &jobs, |a_ty, t| {
        let gamma = a_ty.dom();
        let elems = terms(u, a_ty);
        for a0 in &elems {
            for a1 in &elems {
                let w = || json!({ "A": a_ty.to_json(), "a0": a0.to_json(), "a1": a1.to_json() });
                let ty = (id.form)(a_ty, a0, a1);
                t.check("id.1", ty.as_ref().map(|m| is_type(u, gamma, m)).map_err(clone_err), w);
                let Ok(ty) = ty else { continue };
                for sigma in substitutions_into(gamma, bound) {
                    let moved = (|| (id.form)(&sigma.compose(a_ty)?, &sigma.compose(a0)?, &sigma.compose(a1)?))();
                    t.check("id.2", eq(sigma.compose(&ty), moved), || json!({ "at": w(), "sigma": sigma.to_json() }));
                }
            }
        }
        for a in &elems {
            let w = || json!({ "A": a_ty.to_json(), "a": a.to_json() });
            let refl = (id.refl)(a_ty, a);
            let typed = (|| types_as(u, refl.as_ref().map_err(clone_err)?, &(id.form)(a_ty, a, a)?))();
            t.check("id.3", typed, w);
            for sigma in substitutions_into(gamma, bound) {
                let lhs = refl.as_ref().map_err(clone_err).and_then(|r| sigma.compose(r));
                let rhs = (|| (id.refl)(&sigma.compose(a_ty)?, &sigma.compose(a)?))();
                t.check("id.4", eq(lhs, rhs), || json!({ "at": w(), "sigma": sigma.to_json() }));
            }
            let ctx = match id_context(id, a_ty, a) {
                Ok(c) => c,
                Err(e) => {
                    t.check("id.5", Err(e), w);
                    continue;
                }
            };
            for c_ty in all_maps(ctx.ext_id.ext(), u.ty()) {
                let Ok(base) = ctx.rho.compose(&c_ty) else { continue };
                for c in terms(u, &base) {
                    let wc = || json!({ "at": w(), "C": c_ty.to_json(), "c": c.to_json() });
                    let j = (id.j)(&ctx, &c_ty, &c);
                    let computes = (|| {
                        let j = j.as_ref().map_err(clone_err)?;
                        Ok(types_as(u, j, &c_ty)? && ctx.rho.compose(j)? == c)
                    })();
                    t.check("id.5", computes, wc);
                    if !id.j_stable {
                        continue;
                    }
                    for sigma in substitutions_into(gamma, bound) {
                        let stable = (|| {
                            let (moved, upper) = id_substitution(id, &ctx, &sigma)?;
                            let lhs = (id.j)(&moved, &upper.compose(&c_ty)?, &sigma.compose(&c)?)?;
                            Ok(lhs == upper.compose(j.as_ref().map_err(clone_err)?)?)
                        })();
                        t.check("id.6", stable, || json!({ "at": wc(), "sigma": sigma.to_json() }));
                    }
                }
            }
        }
    });
    tally.into_report("id", bound)
}

/// All four suites for a single-universe structure set.
pub fn check_all(s: &ElemStructures, bound: usize) -> Vec<LawReport> {
    vec![
        check_elem_unit(&s.unit, bound),
        check_elem_pi(&s.pi, bound),
        check_elem_sigma(&s.sigma, bound),
        check_elem_id(&s.id, bound),
    ]
}
