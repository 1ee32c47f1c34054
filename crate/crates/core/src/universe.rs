//! Universes tp: Tm → Ty with chosen context extension, morphisms, lifts and towers.

use serde_json::{json, Value};

use crate::enumerate::{all_maps, objects_upto};
use crate::error::{Error, Result};
use crate::finset::{bang, is_pullback, pullback, terminal, FinMap, FinObj, PullbackResult, Square};
use crate::label::Label;
use crate::mapclass::{principal_class, MapClass};
use crate::report::Verdict;

/// A map tp: Tm → Ty. Context extension along A: Γ → Ty is the chosen
/// pullback of A against tp, whose elements are the pairs (γ, t).
#[derive(Clone, Debug, PartialEq)]
pub struct Universe {
    tp: FinMap,
}

/// The chosen pullback Γ.A with display d_A: Γ.A → Γ and var_A: Γ.A → Tm.
#[derive(Clone, Debug)]
pub struct ContextExtension {
    pub a: FinMap,
    pub pullback: PullbackResult,
}

impl ContextExtension {
    pub fn ext(&self) -> &FinObj {
        &self.pullback.apex
    }

    pub fn context(&self) -> &FinObj {
        self.a.dom()
    }

    pub fn display(&self) -> &FinMap {
        &self.pullback.proj1
    }

    pub fn var_map(&self) -> &FinMap {
        &self.pullback.proj2
    }

    pub fn square(&self) -> Square {
        self.pullback.square()
    }

    /// The element (γ, t), if t lies over A(γ).
    pub fn index_of(&self, gamma: usize, t: usize) -> Option<usize> {
        self.pullback.index_of(gamma, t)
    }

    /// The pair (γ, t) of an element.
    pub fn parts(&self, i: usize) -> (usize, usize) {
        self.pullback.pairs()[i]
    }
}

impl Universe {
    pub fn new(tp: FinMap) -> Self {
        Universe { tp }
    }

    pub fn tp(&self) -> &FinMap {
        &self.tp
    }

    pub fn ty(&self) -> &FinObj {
        self.tp.cod()
    }

    pub fn tm(&self) -> &FinObj {
        self.tp.dom()
    }

    pub fn principal_class(&self) -> MapClass {
        principal_class(&self.tp)
    }

    pub fn context_extend(&self, a: &FinMap) -> Result<ContextExtension> {
        if a.cod() != self.ty() {
            return Err(Error::CodomainMismatch { op: "context_extend", left: a.cod().len(), right: self.ty().len() });
        }
        Ok(ContextExtension { a: a.clone(), pullback: pullback(a, &self.tp)? })
    }

    /// σ.a: Δ → Γ.A, δ ↦ (σ(δ), a(δ)).
    pub fn pair_sub(&self, ext: &ContextExtension, sigma: &FinMap, a: &FinMap) -> Result<FinMap> {
        if sigma.cod() != ext.context() || a.cod() != self.tm() || a.dom() != sigma.dom() {
            return Err(Error::CodomainMismatch { op: "pair_sub", left: sigma.cod().len(), right: ext.context().len() });
        }
        let table = (0..sigma.dom().len())
            .map(|d| {
                ext.index_of(sigma.apply(d), a.apply(d))
                    .ok_or_else(|| Error::TypeMismatch { witness: sigma.dom().label(d).clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap::from_table_unchecked(sigma.dom(), ext.ext(), table))
    }

    /// The substitution σ.A: Δ.(σ ≫ A) → Γ.A, (δ, t) ↦ (σ δ, t).
    pub fn weaken(&self, sigma: &FinMap, ext: &ContextExtension) -> Result<(ContextExtension, FinMap)> {
        let sub = self.context_extend(&sigma.compose(&ext.a)?)?;
        let first = sub.display().compose(sigma)?;
        let map = self.pair_sub(ext, &first, sub.var_map())?;
        Ok((sub, map))
    }

    pub fn to_json(&self) -> Value {
        json!({ "ty": self.ty().to_json(), "tm": self.tm().to_json(), "tp": self.tp.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let tp = FinMap::from_json(field(value, "tp")?)?;
        let ty = FinObj::from_json(field(value, "ty")?)?;
        let tm = FinObj::from_json(field(value, "tm")?)?;
        if tp.dom() != &tm || tp.cod() != &ty {
            return Err(Error::BadTable("tp does not go from tm to ty".into()));
        }
        Ok(Universe::new(tp))
    }
}

fn field<'a>(value: &'a Value, key: &str) -> Result<&'a Value> {
    value.get(key).ok_or_else(|| Error::BadTable(format!("missing field {key}")))
}

pub const TOP: &str = "⊤";
pub const BOTTOM: &str = "⊥";
pub const PROOF: &str = "•";

/// Ty = {⊥, ⊤}, Tm = {(⊤, •)}, tp the first projection.
pub fn build_propositional_universe() -> Universe {
    let ty = FinObj::new([Label::atom(BOTTOM), Label::atom(TOP)]).expect("distinct");
    let tm = FinObj::new([Label::pair(Label::atom(TOP), Label::atom(PROOF))]).expect("single");
    Universe::new(FinMap::from_labels(&tm, &ty, |_| Label::atom(TOP)).expect("⊤ exists"))
}

/// The label of the code for an n-element type.
pub fn code(n: usize) -> Label {
    Label::pair(Label::atom("code"), Label::nat(n as u64))
}

/// The size encoded by a code label.
pub fn code_size(label: &Label) -> Option<usize> {
    match label.as_pair()? {
        (Label::Atom(tag), Label::Nat(n)) if &**tag == "code" => Some(*n as usize),
        _ => None,
    }
}

/// Ty = {code(0), …, code(max)}, Tm = {(code(n), i) : i < n}.
pub fn build_cardinality_universe(max_size: usize) -> Universe {
    let ty = FinObj::new((0..=max_size).map(code)).expect("distinct codes");
    let tm = FinObj::new(
        (0..=max_size).flat_map(|n| (0..n).map(move |i| Label::pair(code(n), Label::nat(i as u64)))),
    )
    .expect("distinct terms");
    let tp = FinMap::from_labels(&tm, &ty, |t| t.as_pair().expect("pair").0.clone()).expect("codes exist");
    Universe::new(tp)
}

/// The index in Ty of code(n), if present.
pub fn code_index(u: &Universe, n: usize) -> Option<usize> {
    u.ty().index_of(&code(n))
}

/// A commuting pullback square from tp₀ to tp₁.
#[derive(Clone, Debug)]
pub struct UniverseMorphism {
    pub source: Universe,
    pub target: Universe,
    pub l_ty: FinMap,
    pub l_tm: FinMap,
}

/// Optional strictness requirements on a universe morphism.
#[derive(Clone, Copy, Debug, Default)]
pub struct Strictness {
    /// l_Ty must be injective.
    pub mono_l_ty: bool,
    /// Context extensions along A and A ≫ l_Ty must agree up to relabelling
    /// t ↦ l_Tm(t) with l_Tm preserving labels.
    pub strict_equal: bool,
}

impl UniverseMorphism {
    pub fn square(&self) -> Result<Square> {
        Square::new(self.l_tm.clone(), self.source.tp.clone(), self.target.tp.clone(), self.l_ty.clone())
    }

    pub fn identity(u: &Universe) -> Self {
        UniverseMorphism {
            source: u.clone(),
            target: u.clone(),
            l_ty: FinMap::identity(u.ty()),
            l_tm: FinMap::identity(u.tm()),
        }
    }
}

/// True iff the morphism square is a pullback and the requested strictness holds.
pub fn check_universe_morphism(m: &UniverseMorphism, strict: Strictness) -> bool {
    let Ok(square) = m.square() else { return false };
    if !is_pullback(&square).unwrap_or(false) {
        return false;
    }
    if strict.mono_l_ty && !m.l_ty.is_injective() {
        return false;
    }
    if strict.strict_equal {
        let same = |f: &FinMap| (0..f.dom().len()).all(|i| f.dom().label(i) == f.cod().label(f.apply(i)));
        if !same(&m.l_tm) || !same(&m.l_ty) {
            return false;
        }
    }
    true
}

/// A morphism together with a code U₀ for Ty₀ in the target.
#[derive(Clone, Debug)]
pub struct UniverseLift {
    pub morphism: UniverseMorphism,
    pub u0: FinMap,
    pub as_tm: FinMap,
}

impl UniverseLift {
    /// asTm ≫ tp₁ = !_{Ty₀} ≫ U₀.
    pub fn classifier_square(&self) -> Result<Square> {
        Square::new(
            self.as_tm.clone(),
            bang(self.morphism.source.ty()),
            self.morphism.target.tp.clone(),
            self.u0.clone(),
        )
    }

    /// The comparison Ty₀ → 1.U₀, which is a bijection for a valid lift.
    pub fn classifier_comparison(&self) -> Result<FinMap> {
        let ext = self.morphism.target.context_extend(&self.u0)?;
        self.morphism.target.pair_sub(&ext, &bang(self.morphism.source.ty()), &self.as_tm)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "l_ty": self.morphism.l_ty.to_json(),
            "l_tm": self.morphism.l_tm.to_json(),
            "u0": self.u0.to_json(),
            "as_tm": self.as_tm.to_json(),
        })
    }
}

pub fn check_universe_lift(l: &UniverseLift) -> bool {
    check_universe_morphism(&l.morphism, Strictness::default())
        && l.classifier_square().map(|sq| is_pullback(&sq).unwrap_or(false)).unwrap_or(false)
}

/// For every Γ of size ≤ bound and A: Γ → Ty₀, the map (γ, t) ↦ (γ, l_Tm t)
/// from Γ.A to Γ.(A ≫ l_Ty) is a bijection commuting with the displays.
pub fn lift_commutation(m: &UniverseMorphism, bound: usize) -> Result<Verdict> {
    let mut v = Verdict::new("lift.commute", "context extension commutes with the morphism up to iso");
    for gamma in objects_upto(bound) {
        for a in all_maps(&gamma, m.source.ty()) {
            let low = m.source.context_extend(&a)?;
            let high = m.target.context_extend(&a.compose(&m.l_ty)?)?;
            let cmp = m.target.pair_sub(&high, low.display(), &low.var_map().compose(&m.l_tm)?)?;
            let ok = cmp.is_bijective() && cmp.compose(high.display())? == *low.display();
            v.record(ok, || json!({ "A": a.to_json() }));
        }
    }
    Ok(v)
}

/// Cardinality universes with bounds k₀ < k₁ < … and lifts between consecutive levels.
#[derive(Clone, Debug)]
pub struct UniverseTower {
    pub bounds: Vec<usize>,
    pub levels: Vec<Universe>,
    pub lifts: Vec<UniverseLift>,
}

pub fn build_tower(bounds: &[usize]) -> Result<UniverseTower> {
    for w in bounds.windows(2) {
        if w[1] < w[0] + 1 {
            return Err(Error::BoundsTooTight(format!(
                "level with bound {} cannot classify the {} codes below it",
                w[1],
                w[0] + 1
            )));
        }
    }
    let levels: Vec<Universe> = bounds.iter().map(|&k| build_cardinality_universe(k)).collect();
    let mut lifts = Vec::new();
    for (i, w) in bounds.windows(2).enumerate() {
        let (low, high) = (&levels[i], &levels[i + 1]);
        let l_ty = FinMap::from_labels(low.ty(), high.ty(), Label::clone)?;
        let l_tm = FinMap::from_labels(low.tm(), high.tm(), Label::clone)?;
        let classifier = code(w[0] + 1);
        let u0 = FinMap::from_labels(&terminal(), high.ty(), |_| classifier.clone())?;
        let as_tm = FinMap::from_labels(low.ty(), high.tm(), |c| {
            Label::pair(classifier.clone(), Label::nat(code_size(c).expect("code") as u64))
        })?;
        let lift = UniverseLift {
            morphism: UniverseMorphism { source: low.clone(), target: high.clone(), l_ty, l_tm },
            u0,
            as_tm,
        };
        if !check_universe_lift(&lift) {
            return Err(Error::SquareViolation(format!("lift from level {i} does not verify")));
        }
        lifts.push(lift);
    }
    Ok(UniverseTower { bounds: bounds.to_vec(), levels, lifts })
}

impl UniverseTower {
    pub fn to_json(&self) -> Value {
        json!({
            "bounds": self.bounds,
            "levels": self.levels.iter().map(Universe::to_json).collect::<Vec<_>>(),
            "lifts": self.lifts.iter().map(UniverseLift::to_json).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top(u: &Universe) -> usize {
        u.ty().index_of(&Label::atom(TOP)).unwrap()
    }

    #[test]
    fn propositional_extensions() {
        let u = build_propositional_universe();
        assert_eq!((u.ty().len(), u.tm().len()), (2, 1));
        let g = FinObj::new([Label::atom("g")]).unwrap();
        let ext = u.context_extend(&FinMap::constant(&g, u.ty(), top(&u))).unwrap();
        assert_eq!(ext.ext().elements()[0].to_string(), "(g,(⊤,•))");
        assert!(ext.display().is_bijective());
        let bot = u.ty().index_of(&Label::atom(BOTTOM)).unwrap();
        assert!(u.context_extend(&FinMap::constant(&g, u.ty(), bot)).unwrap().ext().is_empty());
        let id = u.context_extend(&FinMap::identity(u.ty())).unwrap();
        assert!(id.var_map().is_bijective());
    }

    #[test]
    fn pair_sub_examples() {
        let u = build_propositional_universe();
        let g = FinObj::new([Label::atom("g")]).unwrap();
        let d = FinObj::new([Label::atom("d")]).unwrap();
        let ext = u.context_extend(&FinMap::constant(&g, u.ty(), top(&u))).unwrap();
        let sigma = FinMap::constant(&d, &g, 0);
        let a = FinMap::constant(&d, u.tm(), 0);
        assert_eq!(u.pair_sub(&ext, &sigma, &a).unwrap().table(), &[0]);
        let whole = u.pair_sub(&ext, ext.display(), ext.var_map()).unwrap();
        assert!(whole.is_identity());
        let bot = u.ty().index_of(&Label::atom(BOTTOM)).unwrap();
        let empty = u.context_extend(&FinMap::constant(&g, u.ty(), bot)).unwrap();
        assert!(matches!(u.pair_sub(&empty, &sigma, &a), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn cardinality_and_tower() {
        let u = build_cardinality_universe(2);
        assert_eq!((u.ty().len(), u.tm().len()), (3, 3));
        assert!(build_cardinality_universe(0).tm().is_empty());
        let t = build_tower(&[2, 4]).unwrap();
        let l = &t.lifts[0];
        assert_eq!(l.u0.cod().label(l.u0.apply(0)), &code(3));
        assert!(l.classifier_comparison().unwrap().is_bijective());
        assert!(build_tower(&[0, 1]).is_ok());
        assert!(matches!(build_tower(&[2, 2]), Err(Error::BoundsTooTight(_))));
        assert!(lift_commutation(&l.morphism, 2).unwrap().pass);
    }

    #[test]
    fn morphism_checks() {
        let u = build_cardinality_universe(2);
        assert!(check_universe_morphism(&UniverseMorphism::identity(&u), Strictness { mono_l_ty: true, strict_equal: true }));
        let mut bad = build_tower(&[2, 4]).unwrap().lifts[0].clone();
        // Send the single term of code(1) into the fiber over code(2)'s neighbour.
        let mut table = bad.morphism.l_tm.table().to_vec();
        table[0] = 3;
        bad.morphism.l_tm = FinMap::new(bad.morphism.l_tm.dom().clone(), bad.morphism.l_tm.cod().clone(), table).unwrap();
        assert!(!check_universe_lift(&bad));
    }

    #[test]
    fn json_roundtrip() {
        let u = build_cardinality_universe(2);
        assert_eq!(Universe::from_json(&u.to_json()).unwrap(), u);
    }
}
