//! Polynomial functors P_f X = Σ_{b} X^{E_b} for a signature f: E → B.

use serde_json::{json, Value};

use crate::enumerate::maps_into;
use crate::error::{Error, Result};
use crate::finset::{bang, is_pullback, pullback, pushforward, FinMap, FinObj, PullbackResult, PushforwardResult, Square};
use crate::label::Label;
use crate::mapclass::MapClass;

/// A signature f: E → B together with the class it belongs to.
#[derive(Clone, Debug)]
pub struct PolySignature {
    f: FinMap,
    class: MapClass,
}

impl PolySignature {
    pub fn new(f: FinMap, class: MapClass) -> Result<Self> {
        if !class.contains(&f) {
            return Err(Error::ClassViolation(format!(
                "signature {f} is not in class {}",
                class.name()
            )));
        }
        Ok(PolySignature { f, class })
    }

    /// A signature in the class of all maps.
    pub fn any(f: FinMap) -> Self {
        PolySignature { f, class: MapClass::all() }
    }

    pub fn map(&self) -> &FinMap {
        &self.f
    }

    pub fn class(&self) -> &MapClass {
        &self.class
    }
}

/// P_f X with its projections.
///
/// Elements are `(b, ((e, x), …))`: a base point and the graph of a function E_b → X.
#[derive(Clone, Debug)]
pub struct PolyApplication {
    pub f: FinMap,
    pub x: FinObj,
    pub total: FinObj,
    pub fst_proj: FinMap,
    /// The chosen pullback fstProj ×_B f, with pairs ((b, s), e).
    pub snd_source: PullbackResult,
    pub snd_proj: FinMap,
    sections: Vec<Vec<usize>>,
    fibers: Vec<Vec<usize>>,
    pos_in_fiber: Vec<usize>,
    offsets: Vec<usize>,
}

/// Computes P_f X as the pushforward along f of the constant family E × X → E.
pub fn apply_poly(sig: &PolySignature, x: &FinObj) -> PolyApplication {
    apply_poly_map(&sig.f, x)
}

pub fn apply_poly_map(f: &FinMap, x: &FinObj) -> PolyApplication {
    let e = f.dom();
    let family = pullback(&bang(e), &bang(x)).expect("both over ⋆");
    let pf = pushforward(f, &family.proj1).expect("family over E");
    // A section picks (e, x) over each e; keep only x. Within a fiber over e
    // the pairs (e, x) are ordered by x, so this relabelling keeps the order.
    let sections: Vec<Vec<usize>> = (0..pf.total.len())
        .map(|p| pf.section(p).iter().map(|&z| family.pairs()[z].1).collect())
        .collect();
    let fibers = f.fibers();
    let labels = (0..pf.total.len())
        .map(|p| {
            let b = pf.map.apply(p);
            let graph = fibers[b]
                .iter()
                .zip(&sections[p])
                .map(|(&ei, &xi)| Label::pair(e.label(ei).clone(), x.label(xi).clone()))
                .collect();
            Label::pair(f.cod().label(b).clone(), Label::tuple(graph))
        })
        .collect();
    let total = FinObj::from_sorted(labels);
    let fst_proj = FinMap::from_table_unchecked(&total, f.cod(), pf.map.table().to_vec());
    let snd_source = pullback(&fst_proj, f).expect("common base");
    let mut pos_in_fiber = vec![0; e.len()];
    for fiber in &fibers {
        for (k, &ei) in fiber.iter().enumerate() {
            pos_in_fiber[ei] = k;
        }
    }
    let snd_table = snd_source.pairs().iter().map(|&(p, ei)| sections[p][pos_in_fiber[ei]]).collect();
    let snd_proj = FinMap::from_table_unchecked(&snd_source.apex, x, snd_table);
    let mut offsets = Vec::with_capacity(fibers.len());
    let mut acc = 0;
    for fiber in &fibers {
        offsets.push(acc);
        acc += x.len().pow(fiber.len() as u32);
    }
    PolyApplication {
        f: f.clone(),
        x: x.clone(),
        total,
        fst_proj,
        snd_source,
        snd_proj,
        sections,
        fibers,
        pos_in_fiber,
        offsets,
    }
}

impl PolyApplication {
    pub fn fiber(&self, b: usize) -> &[usize] {
        &self.fibers[b]
    }

    /// Values of the section of element `p`, aligned with `fiber(fst(p))`.
    pub fn section(&self, p: usize) -> &[usize] {
        &self.sections[p]
    }

    pub fn section_at(&self, p: usize, e: usize) -> usize {
        self.sections[p][self.pos_in_fiber[e]]
    }

    pub fn position_in_fiber(&self, e: usize) -> usize {
        self.pos_in_fiber[e]
    }

    /// The element (b, s) with s given by values aligned with `fiber(b)`.
    pub fn encode(&self, b: usize, xs: &[usize]) -> usize {
        debug_assert_eq!(xs.len(), self.fibers[b].len());
        let n = self.x.len();
        self.offsets[b] + xs.iter().fold(0, |acc, &xi| acc * n + xi)
    }
}

/// The action (b, s) ↦ (b, s ≫ h) between precomputed applications.
pub fn poly_map_between(from: &PolyApplication, to: &PolyApplication, h: &FinMap) -> Result<FinMap> {
    if from.f != to.f || h.dom() != &from.x || h.cod() != &to.x {
        return Err(Error::CodomainMismatch { op: "poly_map", left: h.dom().len(), right: from.x.len() });
    }
    let table = (0..from.total.len())
        .map(|p| {
            let b = from.fst_proj.apply(p);
            let ys: Vec<usize> = from.section(p).iter().map(|&xi| h.apply(xi)).collect();
            to.encode(b, &ys)
        })
        .collect();
    Ok(FinMap::from_table_unchecked(&from.total, &to.total, table))
}

pub fn poly_map(sig: &PolySignature, h: &FinMap) -> FinMap {
    let from = apply_poly(sig, h.dom());
    let to = apply_poly(sig, h.cod());
    poly_map_between(&from, &to, h).expect("shapes agree")
}

/// A map Γ → P_f X split into its base component and its fiberwise component.
#[derive(Clone, Debug)]
pub struct PolyDecomposition {
    pub fst: FinMap,
    /// The chosen pullback fst ×_B f, pairs (γ, e).
    pub snd_source: PullbackResult,
    pub snd: FinMap,
}

/// fst = t ≫ fstProj and snd = (t ×_B f) ≫ sndProj.
pub fn decompose(app: &PolyApplication, t: &FinMap) -> Result<PolyDecomposition> {
    if t.cod() != &app.total {
        return Err(Error::CodomainMismatch { op: "decompose", left: t.cod().len(), right: app.total.len() });
    }
    let fst = t.compose(&app.fst_proj)?;
    let snd_source = pullback(&fst, &app.f)?;
    let t_times_f = FinMap::from_table_unchecked(
        &snd_source.apex,
        &app.snd_source.apex,
        snd_source
            .pairs()
            .iter()
            .map(|&(g, e)| app.snd_source.index_of(t.apply(g), e).expect("same base point"))
            .collect(),
    );
    let snd = t_times_f.compose(&app.snd_proj)?;
    Ok(PolyDecomposition { fst, snd_source, snd })
}

/// Inverse of [`decompose`].
pub fn recompose(app: &PolyApplication, fst: &FinMap, snd: &FinMap) -> Result<FinMap> {
    if fst.cod() != app.f.cod() || snd.cod() != &app.x {
        return Err(Error::CodomainMismatch { op: "recompose", left: fst.cod().len(), right: app.f.cod().len() });
    }
    let source = pullback(fst, &app.f)?;
    if snd.dom() != &source.apex {
        return Err(Error::CodomainMismatch { op: "recompose", left: snd.dom().len(), right: source.apex.len() });
    }
    let table = (0..fst.dom().len())
        .map(|g| {
            let b = fst.apply(g);
            let xs: Vec<usize> =
                app.fiber(b).iter().map(|&e| snd.apply(source.index_of(g, e).expect("over b"))).collect();
            app.encode(b, &xs)
        })
        .collect();
    Ok(FinMap::from_table_unchecked(fst.dom(), &app.total, table))
}

/// The composite signature f' ▷ f: compDom → P_f B'.
#[derive(Clone, Debug)]
pub struct CompositeSignature {
    pub outer: FinMap,
    pub inner: FinMap,
    /// P_f B' with its projections.
    pub inner_app: PolyApplication,
    /// The chosen pullback of sndProj: P_f B' ×_B E → B' against f'.
    pub second: PullbackResult,
    pub comp_dom: FinObj,
    pub sig: FinMap,
}

pub fn poly_compose(outer: &PolySignature, inner: &PolySignature) -> Result<CompositeSignature> {
    let comp = compose_maps(&outer.f, &inner.f)?;
    if !inner.class.contains(&comp.sig) {
        return Err(Error::ClassViolation(format!(
            "composite signature is not in class {}",
            inner.class.name()
        )));
    }
    Ok(comp)
}

pub fn compose_maps(outer: &FinMap, inner: &FinMap) -> Result<CompositeSignature> {
    let inner_app = apply_poly_map(inner, outer.cod());
    let second = pullback(&inner_app.snd_proj, outer)?;
    let sig = second.proj1.compose(&inner_app.snd_source.proj1)?;
    Ok(CompositeSignature {
        outer: outer.clone(),
        inner: inner.clone(),
        comp_dom: second.apex.clone(),
        inner_app,
        second,
        sig,
    })
}

impl CompositeSignature {
    /// compDom element ↦ ((b, φ) ∈ P_f B', e ∈ E_b, e' ∈ E' over φ(e)).
    pub fn decode(&self, c: usize) -> (usize, usize, usize) {
        let (mid, e_prime) = self.second.pairs()[c];
        let (p, e) = self.inner_app.snd_source.pairs()[mid];
        (p, e, e_prime)
    }

    pub fn encode(&self, p: usize, e: usize, e_prime: usize) -> Option<usize> {
        let mid = self.inner_app.snd_source.index_of(p, e)?;
        self.second.index_of(mid, e_prime)
    }

    /// The currying bijection P_{f'▷f} X → P_f(P_{f'} X):
    /// ((b, φ), s) ↦ (b, e ↦ (φ(e), e' ↦ s(e, e'))).
    pub fn currying(&self, x: &FinObj) -> Result<CurryingIso> {
        let lhs = apply_poly_map(&self.sig, x);
        let outer_x = apply_poly_map(&self.outer, x);
        let rhs = apply_poly_map(&self.inner, &outer_x.total);
        let sig_fiber_pos = |c: usize| lhs.position_in_fiber(c);
        let table = (0..lhs.total.len())
            .map(|el| {
                let p = lhs.fst_proj.apply(el);
                let b = self.inner_app.fst_proj.apply(p);
                let inner_vals: Vec<usize> = self
                    .inner_app
                    .fiber(b)
                    .iter()
                    .map(|&e| {
                        let b_prime = self.inner_app.section_at(p, e);
                        let xs: Vec<usize> = outer_x
                            .fiber(b_prime)
                            .iter()
                            .map(|&e_prime| {
                                let c = self.encode(p, e, e_prime).expect("tuple in compDom");
                                lhs.section(el)[sig_fiber_pos(c)]
                            })
                            .collect();
                        outer_x.encode(b_prime, &xs)
                    })
                    .collect();
                rhs.encode(b, &inner_vals)
            })
            .collect();
        let iso = FinMap::from_table_unchecked(&lhs.total, &rhs.total, table);
        Ok(CurryingIso { lhs, outer_x, rhs, iso })
    }
}

/// The currying map at one X together with both sides.
#[derive(Clone, Debug)]
pub struct CurryingIso {
    pub lhs: PolyApplication,
    pub outer_x: PolyApplication,
    pub rhs: PolyApplication,
    pub iso: FinMap,
}

/// Checks naturality of the currying bijection along h: X → Y:
/// iso_X ≫ P_f(P_{f'} h) = P_{f'▷f} h ≫ iso_Y.
pub fn currying_natural(comp: &CompositeSignature, h: &FinMap) -> Result<bool> {
    let at_x = comp.currying(h.dom())?;
    let at_y = comp.currying(h.cod())?;
    let outer_h = poly_map_between(&at_x.outer_x, &at_y.outer_x, h)?;
    let inner_outer_h = poly_map_between(&at_x.rhs, &at_y.rhs, &outer_h)?;
    let lhs_h = poly_map_between(&at_x.lhs, &at_y.lhs, h)?;
    Ok(at_x.iso.compose(&inner_outer_h)? == lhs_h.compose(&at_y.iso)?)
}

/// A vertical map ρ: E → E' over B between signatures f and f'.
#[derive(Clone, Debug)]
pub struct VerticalTransformation {
    pub rho: FinMap,
    pub f: FinMap,
    pub f_prime: FinMap,
}

pub fn vertical_nat_trans(rho: &FinMap, f: &PolySignature, f_prime: &PolySignature) -> Result<VerticalTransformation> {
    vertical_from_maps(rho, &f.f, &f_prime.f)
}

pub fn vertical_from_maps(rho: &FinMap, f: &FinMap, f_prime: &FinMap) -> Result<VerticalTransformation> {
    if rho.dom() != f.dom() || rho.cod() != f_prime.dom() || f.cod() != f_prime.cod() {
        return Err(Error::CodomainMismatch { op: "vertical", left: rho.dom().len(), right: f.dom().len() });
    }
    let composite = rho.compose(f_prime)?;
    if let Some(w) = composite.first_difference(f) {
        return Err(Error::TriangleViolation { witness: w });
    }
    Ok(VerticalTransformation { rho: rho.clone(), f: f.clone(), f_prime: f_prime.clone() })
}

impl VerticalTransformation {
    /// v_X: P_{f'} X → P_f X, (b, s) ↦ (b, ρ|E_b ≫ s).
    pub fn component(&self, x: &FinObj) -> (PolyApplication, PolyApplication, FinMap) {
        let from = apply_poly_map(&self.f_prime, x);
        let to = apply_poly_map(&self.f, x);
        let v = self.component_between(&from, &to);
        (from, to, v)
    }

    pub fn component_between(&self, from: &PolyApplication, to: &PolyApplication) -> FinMap {
        let table = (0..from.total.len())
            .map(|p| {
                let b = from.fst_proj.apply(p);
                let xs: Vec<usize> =
                    to.fiber(b).iter().map(|&e| from.section_at(p, self.rho.apply(e))).collect();
                to.encode(b, &xs)
            })
            .collect();
        FinMap::from_table_unchecked(&from.total, &to.total, table)
    }
}

/// A commuting square φ ≫ f' = f ≫ δ:
/// ```text
///   E --φ--> E'
///   |f       |f'
///   B --δ--> B'
/// ```
#[derive(Clone, Debug)]
pub struct BcSquare {
    pub phi: FinMap,
    pub f: FinMap,
    pub f_prime: FinMap,
    pub delta: FinMap,
}

impl BcSquare {
    pub fn as_square(&self) -> Result<Square> {
        Square::new(self.phi.clone(), self.f.clone(), self.f_prime.clone(), self.delta.clone())
    }
}

/// Beck–Chevalley comparison α_W: f_!(φ^* W) → δ^*(f'_! W), (e, w) ↦ (f(e), w).
/// Both sides are objects over B.
pub fn bc_alpha(sq: &BcSquare, w: &FinMap) -> Result<FinMap> {
    let src = pullback(&sq.phi, w)?;
    let tgt = pullback(&sq.delta, &w.compose(&sq.f_prime)?)?;
    let table = src
        .pairs()
        .iter()
        .map(|&(e, wi)| tgt.index_of(sq.f.apply(e), wi).expect("square commutes"))
        .collect();
    Ok(FinMap::from_table_unchecked(&src.apex, &tgt.apex, table))
}

/// Beck–Chevalley comparison β_W: δ^*(f'_* W) → f_*(φ^* W), (b, s) ↦ (b, e ↦ (e, s(φ e))).
pub fn bc_beta(sq: &BcSquare, w: &FinMap) -> Result<FinMap> {
    let pushed = pushforward(&sq.f_prime, w)?;
    let src = pullback(&sq.delta, &pushed.map)?;
    let restricted = pullback(&sq.phi, w)?;
    let tgt = pushforward(&sq.f, &restricted.proj1)?;
    let table = src
        .pairs()
        .iter()
        .map(|&(b, s)| {
            let zs: Vec<usize> = tgt
                .fiber(b)
                .iter()
                .map(|&e| {
                    let wi = pushed.section_at(s, sq.phi.apply(e));
                    restricted.index_of(e, wi).expect("w lies over φ(e)")
                })
                .collect();
            tgt.encode(b, &zs).expect("section of the restricted family")
        })
        .collect();
    Ok(FinMap::from_table_unchecked(&src.apex, &tgt.total, table))
}

#[derive(Clone, Debug)]
pub struct BcReport {
    pub is_pullback: bool,
    pub alpha_bijective: bool,
    pub beta_bijective: bool,
    /// True iff every component within the test bound is a bijection.
    pub iso_verdict: bool,
    pub components: usize,
    pub first_failure: Option<Value>,
}

/// Computes α_W and β_W for every class map W → E' with |W| ≤ test_bound.
pub fn bc_transforms(sq: &BcSquare, class: &MapClass, test_bound: usize) -> Result<BcReport> {
    let square = sq.as_square()?;
    let is_pb = is_pullback(&square)?;
    for (m, which) in [(&sq.f, "f"), (&sq.f_prime, "f'")] {
        if !class.contains(m) {
            return Err(Error::ClassViolation(format!("{which} is not in class {}", class.name())));
        }
    }
    let mut report = BcReport {
        is_pullback: is_pb,
        alpha_bijective: true,
        beta_bijective: true,
        iso_verdict: true,
        components: 0,
        first_failure: None,
    };
    for w in maps_into(sq.phi.cod(), test_bound).into_iter().filter(|w| class.contains(w)) {
        let a = bc_alpha(sq, &w)?.is_bijective();
        let b = bc_beta(sq, &w)?.is_bijective();
        report.components += 2;
        report.alpha_bijective &= a;
        report.beta_bijective &= b;
        if !(a && b) && report.first_failure.is_none() {
            report.first_failure = Some(json!({ "w": w.to_json(), "alpha": a, "beta": b }));
        }
    }
    report.iso_verdict = report.alpha_bijective && report.beta_bijective;
    Ok(report)
}

/// The distributivity data for f: Y → X and g: Z → Y.
#[derive(Clone, Debug)]
pub struct DistributivityWitness {
    pub f: FinMap,
    pub g: FinMap,
    /// f_* g, with q = push.map: f_* Z → X.
    pub push: PushforwardResult,
    /// The chosen pullback f ×_X q, pairs (y, s).
    pub pullback_leg: PullbackResult,
    /// ε: f ×_X q → Z, (y, s) ↦ s(y).
    pub counit: FinMap,
    /// f': f ×_X q → f_* Z.
    pub f_prime: FinMap,
    /// For each test object w: W → Z, the bijection f_*(g_! W) → q_!(f'_*(ε^* W)).
    pub iso_components: Vec<(FinMap, FinMap)>,
}

pub fn distributivity(f: &FinMap, g: &FinMap, class: &MapClass, test_bound: usize) -> Result<DistributivityWitness> {
    for (m, which) in [(f, "f"), (g, "g")] {
        if !class.contains(m) {
            return Err(Error::ClassViolation(format!("{which} is not in class {}", class.name())));
        }
    }
    let push = pushforward(f, g)?;
    let (pullback_leg, counit) = push.counit()?;
    if !push.untranspose(&pullback_leg, &counit)?.is_identity() {
        return Err(Error::LawViolation("counit is not the transpose of the identity".into()));
    }
    let f_prime = pullback_leg.proj2.clone();
    let mut witness = DistributivityWitness {
        f: f.clone(),
        g: g.clone(),
        push,
        pullback_leg,
        counit,
        f_prime,
        iso_components: Vec::new(),
    };
    for w in maps_into(g.dom(), test_bound).into_iter().filter(|w| class.contains(w)) {
        let iso = witness.iso_at(&w)?;
        witness.iso_components.push((w, iso));
    }
    Ok(witness)
}

impl DistributivityWitness {
    pub fn q(&self) -> &FinMap {
        &self.push.map
    }

    /// (x, t: Y_x → W) ↦ ((x, t ≫ w), (y, s) ↦ ((y, s), t(y))), checked to be a
    /// bijection commuting with the maps to X.
    pub fn iso_at(&self, w: &FinMap) -> Result<FinMap> {
        let lhs = pushforward(&self.f, &w.compose(&self.g)?)?;
        let restricted = pullback(&self.counit, w)?;
        let rhs = pushforward(&self.f_prime, &restricted.proj1)?;
        let table = (0..lhs.total.len())
            .map(|p| {
                let x = lhs.map.apply(p);
                let ts = lhs.section(p);
                let zs: Vec<usize> = ts.iter().map(|&wi| w.apply(wi)).collect();
                let s = self.push.encode(x, &zs).expect("section of g");
                let us: Vec<usize> = rhs
                    .fiber(s)
                    .iter()
                    .map(|&ys| {
                        let y = self.pullback_leg.pairs()[ys].0;
                        let wi = ts[self.f.fibers()[x].iter().position(|&yy| yy == y).expect("y over x")];
                        restricted.index_of(ys, wi).expect("ε(y, s) = w(t(y))")
                    })
                    .collect();
                rhs.encode(s, &us).expect("section of ε^* W")
            })
            .collect();
        let iso = FinMap::from_table_unchecked(&lhs.total, &rhs.total, table);
        let over_x = rhs.map.compose(&self.push.map)?;
        if !iso.is_bijective() || iso.compose(&over_x)? != lhs.map {
            return Err(Error::LawViolation(format!("distributivity component at {w} is not an iso over X")));
        }
        Ok(iso)
    }

    /// f_* h as a map f_*(W) → f_*(Z) over X, for h: W → Z.
    pub fn push_map(&self, h: &FinMap) -> Result<FinMap> {
        let src = pushforward(&self.f, &h.compose(&self.g)?)?;
        let table = (0..src.total.len())
            .map(|p| {
                let x = src.map.apply(p);
                let zs: Vec<usize> = src.section(p).iter().map(|&wi| h.apply(wi)).collect();
                self.push.encode(x, &zs).expect("section of g")
            })
            .collect();
        Ok(FinMap::from_table_unchecked(&src.total, &self.push.total, table))
    }

    /// The underlying map of f'_*(ε^* h).
    pub fn restricted_push(&self, h: &FinMap) -> Result<FinMap> {
        let restricted = pullback(&self.counit, h)?;
        Ok(pushforward(&self.f_prime, &restricted.proj1)?.map)
    }

    /// Membership of f_* h and of f'_*(ε^* h) in `class`; the two should agree.
    pub fn pushforward_stability_check(&self, h: &FinMap, class: &MapClass) -> Result<(bool, bool)> {
        Ok((class.contains(&self.push_map(h)?), class.contains(&self.restricted_push(h)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::all_maps;

    fn fibered(sizes: &[usize]) -> FinMap {
        let n: usize = sizes.iter().sum();
        let table: Vec<usize> =
            sizes.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat(b).take(k)).collect();
        FinMap::new(FinObj::canonical(n), FinObj::canonical(sizes.len()), table).unwrap()
    }

    #[test]
    fn application_examples() {
        let sig = PolySignature::any(fibered(&[1, 2]));
        let app = apply_poly(&sig, &FinObj::canonical(3));
        assert_eq!(app.total.len(), 12);
        let star = apply_poly(&sig, &crate::finset::terminal());
        assert!(star.fst_proj.is_bijective());
        let id = PolySignature::any(FinMap::identity(&FinObj::canonical(2)));
        assert_eq!(apply_poly(&id, &FinObj::canonical(3)).total.len(), 6);
        for q in 0..app.snd_source.apex.len() {
            let (p, e) = app.snd_source.pairs()[q];
            assert_eq!(app.snd_proj.apply(q), app.section_at(p, e));
        }
    }

    #[test]
    fn decompose_identity_gives_projections() {
        let sig = PolySignature::any(fibered(&[1, 2]));
        let app = apply_poly(&sig, &FinObj::canonical(3));
        let d = decompose(&app, &FinMap::identity(&app.total)).unwrap();
        assert_eq!(d.fst, app.fst_proj);
        assert_eq!(d.snd, app.snd_proj);
        let points: Vec<_> = all_maps(&crate::finset::terminal(), &app.total).collect();
        assert_eq!(points.len(), 12);
        for t in points {
            let d = decompose(&app, &t).unwrap();
            assert_eq!(recompose(&app, &d.fst, &d.snd).unwrap(), t);
        }
    }

    #[test]
    fn composite_of_empty_inner() {
        let inner = PolySignature::any(FinMap::from_fn(&FinObj::empty(), &FinObj::canonical(2), |_| 0));
        let outer = PolySignature::any(fibered(&[2]));
        let comp = poly_compose(&outer, &inner).unwrap();
        assert_eq!(comp.comp_dom.len(), 0);
        assert_eq!(comp.inner_app.total.len(), 2);
    }

    #[test]
    fn vertical_identity_and_violation() {
        let f = fibered(&[2, 1]);
        let v = vertical_from_maps(&FinMap::identity(f.dom()), &f, &f).unwrap();
        let (_, _, vx) = v.component(&FinObj::canonical(2));
        assert!(vx.is_identity());
        let swap = FinMap::from_fn(f.dom(), f.dom(), |i| 2 - i);
        assert!(matches!(vertical_from_maps(&swap, &f, &f), Err(Error::TriangleViolation { .. })));
    }

    #[test]
    fn bc_on_a_collapsing_square() {
        // δ collapses two base points with fibers of sizes 1 and 2.
        let f = fibered(&[1, 2]);
        let f_prime = fibered(&[3]);
        let sq = BcSquare {
            phi: FinMap::identity(f.dom()),
            f: f.clone(),
            f_prime: f_prime.clone(),
            delta: FinMap::constant(f.cod(), f_prime.cod(), 0),
        };
        let r = bc_transforms(&sq, &MapClass::all(), 2).unwrap();
        assert!(!r.is_pullback);
        assert!(!r.beta_bijective);
    }

    #[test]
    fn distributivity_examples() {
        let f = fibered(&[2]);
        let g = fibered(&[1, 2]);
        let d = distributivity(&f, &g, &MapClass::all(), 2).unwrap();
        assert_eq!(d.q().fiber_sizes(), vec![2]);
        let id = distributivity(&f, &FinMap::identity(f.dom()), &MapClass::all(), 2).unwrap();
        assert!(id.counit.is_bijective());
    }
}
