//! Finite sets with canonically ordered labels, total maps between them,
//! chosen pullbacks, pushforwards and the terminal object.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::label::Label;

/// A finite set. Elements are distinct and kept in canonical label order, so
/// two objects with the same elements have identical representations.
#[derive(Clone)]
pub struct FinObj {
    elems: Arc<[Label]>,
}

impl FinObj {
    pub fn new<I: IntoIterator<Item = Label>>(labels: I) -> Result<Self> {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        Ok(FinObj { elems: v.into() })
    }

    /// Builds an object from labels that are already strictly increasing.
    pub(crate) fn from_sorted(v: Vec<Label>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]), "labels not sorted");
        FinObj { elems: v.into() }
    }

    /// The object {0, 1, …, n-1}.
    pub fn canonical(n: usize) -> Self {
        FinObj::from_sorted((0..n as u64).map(Label::Nat).collect())
    }

    pub fn empty() -> Self {
        FinObj::canonical(0)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Label] {
        &self.elems
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.elems[i]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.elems.binary_search(label).ok()
    }

    pub fn to_json(&self) -> Value {
        json!({ "elements": self.elems.iter().map(Label::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let elements = value
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadTable("object needs an \"elements\" array".into()))?;
        let labels = elements
            .iter()
            .map(|v| Label::from_json(v).ok_or_else(|| Error::UnknownLabel(v.to_string())))
            .collect::<Result<Vec<_>>>()?;
        FinObj::new(labels)
    }
}

impl PartialEq for FinObj {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elems, &other.elems) || self.elems == other.elems
    }
}

impl Eq for FinObj {}

impl Hash for FinObj {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elems.hash(state)
    }
}

impl fmt::Display for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total function between finite sets, stored as a table of element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    dom: FinObj,
    cod: FinObj,
    table: Arc<[usize]>,
}

impl FinMap {
    pub fn new(dom: FinObj, cod: FinObj, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::BadTable(format!(
                "{} entries for a domain of size {}",
                table.len(),
                dom.len()
            )));
        }
        if let Some(i) = table.iter().position(|&j| j >= cod.len()) {
            return Err(Error::BadTable(format!(
                "{} is sent outside the codomain",
                dom.label(i)
            )));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    /// Builds a map from a function on indices. Panics if an index is out of range.
    pub fn from_fn(dom: &FinObj, cod: &FinObj, f: impl Fn(usize) -> usize) -> Self {
        let table: Vec<usize> = (0..dom.len()).map(f).collect();
        assert!(table.iter().all(|&j| j < cod.len()), "table leaves the codomain");
        FinMap { dom: dom.clone(), cod: cod.clone(), table: table.into() }
    }

    pub(crate) fn from_table_unchecked(dom: &FinObj, cod: &FinObj, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom.len());
        debug_assert!(table.iter().all(|&j| j < cod.len()));
        FinMap { dom: dom.clone(), cod: cod.clone(), table: table.into() }
    }

    pub fn identity(obj: &FinObj) -> Self {
        FinMap::from_fn(obj, obj, |i| i)
    }

    pub fn constant(dom: &FinObj, cod: &FinObj, target: usize) -> Self {
        FinMap::from_fn(dom, cod, |_| target)
    }

    /// Builds a map from a label-level assignment.
    pub fn from_labels(dom: &FinObj, cod: &FinObj, f: impl Fn(&Label) -> Label) -> Result<Self> {
        let table = dom
            .elements()
            .iter()
            .map(|l| {
                let image = f(l);
                cod.index_of(&image).ok_or_else(|| Error::UnknownLabel(image.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(dom.clone(), cod.clone(), table)
    }

    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply_label(&self, label: &Label) -> Option<&Label> {
        self.dom.index_of(label).map(|i| self.cod.label(self.table[i]))
    }

    /// `self ≫ g`: first `self`, then `g`.
    pub fn compose(&self, g: &FinMap) -> Result<FinMap> {
        if self.cod != g.dom {
            return Err(Error::CodomainMismatch {
                op: "compose",
                left: self.cod.len(),
                right: g.dom.len(),
            });
        }
        let table = self.table.iter().map(|&j| g.table[j]).collect::<Vec<_>>();
        Ok(FinMap { dom: self.dom.clone(), cod: g.cod.clone(), table: table.into() })
    }

    /// Preimages of every codomain element, each in increasing order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.cod.len()];
        for (i, &j) in self.table.iter().enumerate() {
            fibers[j].push(i);
        }
        fibers
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cod.len()];
        for &j in self.table.iter() {
            sizes[j] += 1;
        }
        sizes
    }

    pub fn is_injective(&self) -> bool {
        self.fiber_sizes().iter().all(|&n| n <= 1)
    }

    pub fn is_surjective(&self) -> bool {
        self.fiber_sizes().iter().all(|&n| n >= 1)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (i, &j) in self.table.iter().enumerate() {
            inv[j] = i;
        }
        Some(FinMap::from_table_unchecked(&self.cod, &self.dom, inv))
    }

    /// First domain element where the two maps differ.
    pub fn first_difference(&self, other: &FinMap) -> Option<Label> {
        if self.dom != other.dom || self.cod != other.cod {
            return self.dom.elements().first().cloned().or(Some(Label::atom("shape")));
        }
        (0..self.dom.len())
            .find(|&i| self.table[i] != other.table[i])
            .map(|i| self.dom.label(i).clone())
    }

    pub fn to_json(&self) -> Value {
        let table: serde_json::Map<String, Value> = (0..self.dom.len())
            .map(|i| (self.dom.label(i).to_string(), self.cod.label(self.table[i]).to_json()))
            .collect();
        json!({ "dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": table })
    }

    /// Loads a map. Table keys are the printed form of domain labels; values are
    /// JSON labels (or the printed form of a codomain label).
    pub fn from_json(value: &Value) -> Result<Self> {
        let dom = FinObj::from_json(
            value.get("dom").ok_or_else(|| Error::BadTable("map needs \"dom\"".into()))?,
        )?;
        let cod = FinObj::from_json(
            value.get("cod").ok_or_else(|| Error::BadTable("map needs \"cod\"".into()))?,
        )?;
        let entries = value
            .get("table")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::BadTable("map needs a \"table\" object".into()))?;
        let dom_keys = printed_index(&dom)?;
        let cod_keys = printed_index(&cod)?;
        let mut table: Vec<Option<usize>> = vec![None; dom.len()];
        for (key, v) in entries {
            let i = *dom_keys.get(key.as_str()).ok_or_else(|| Error::UnknownLabel(key.clone()))?;
            let j = Label::from_json(v)
                .and_then(|l| cod.index_of(&l))
                .or_else(|| v.as_str().and_then(|s| cod_keys.get(s).copied()))
                .ok_or_else(|| Error::UnknownLabel(v.to_string()))?;
            table[i] = Some(j);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| Error::PartialTable(dom.label(i).clone())))
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(dom, cod, table)
    }
}

fn printed_index(obj: &FinObj) -> Result<HashMap<String, usize>> {
    let mut keys = HashMap::new();
    for (i, l) in obj.elements().iter().enumerate() {
        if keys.insert(l.to_string(), i).is_some() {
            return Err(Error::BadTable(format!("two labels print as {l}")));
        }
    }
    Ok(keys)
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for i in 0..self.dom.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} ↦ {}", self.dom.label(i), self.cod.label(self.table[i]))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The fixed one-element object ⋆.
pub fn terminal() -> FinObj {
    FinObj::from_sorted(vec![Label::atom("⋆")])
}

/// The unique map X → ⋆.
pub fn bang(x: &FinObj) -> FinMap {
    FinMap::constant(x, &terminal(), 0)
}

/// The point ⋆ → X picking element `i`.
pub fn point(x: &FinObj, i: usize) -> FinMap {
    FinMap::constant(&terminal(), x, i)
}

/// The chosen pullback of a cospan `f: X → Z ← Y: g`.
#[derive(Clone, Debug)]
pub struct PullbackResult {
    pub f: FinMap,
    pub g: FinMap,
    /// Pairs (x, y) with f(x) = g(y), in canonical order.
    pub apex: FinObj,
    pub proj1: FinMap,
    pub proj2: FinMap,
    pairs: Arc<[(usize, usize)]>,
}

pub fn pullback(f: &FinMap, g: &FinMap) -> Result<PullbackResult> {
    if f.cod() != g.cod() {
        return Err(Error::CodomainMismatch {
            op: "pullback",
            left: f.cod().len(),
            right: g.cod().len(),
        });
    }
    let g_fibers = g.fibers();
    let mut pairs = Vec::new();
    for x in 0..f.dom().len() {
        for &y in &g_fibers[f.apply(x)] {
            pairs.push((x, y));
        }
    }
    // Index order of (x, y) agrees with label order of the pair labels.
    let labels = pairs
        .iter()
        .map(|&(x, y)| Label::pair(f.dom().label(x).clone(), g.dom().label(y).clone()))
        .collect();
    let apex = FinObj::from_sorted(labels);
    let proj1 = FinMap::from_table_unchecked(&apex, f.dom(), pairs.iter().map(|p| p.0).collect());
    let proj2 = FinMap::from_table_unchecked(&apex, g.dom(), pairs.iter().map(|p| p.1).collect());
    Ok(PullbackResult { f: f.clone(), g: g.clone(), apex, proj1, proj2, pairs: pairs.into() })
}

impl PullbackResult {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index_of(&self, x: usize, y: usize) -> Option<usize> {
        self.pairs.binary_search(&(x, y)).ok()
    }

    /// The unique map W → apex with the given components.
    pub fn mediate(&self, x: &FinMap, y: &FinMap) -> Result<FinMap> {
        if x.dom() != y.dom() || x.cod() != self.f.dom() || y.cod() != self.g.dom() {
            return Err(Error::CodomainMismatch {
                op: "mediate",
                left: x.dom().len(),
                right: y.dom().len(),
            });
        }
        let table = (0..x.dom().len())
            .map(|w| {
                self.index_of(x.apply(w), y.apply(w))
                    .ok_or_else(|| Error::NonCommuting { witness: x.dom().label(w).clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap::from_table_unchecked(x.dom(), &self.apex, table))
    }

    pub fn square(&self) -> Square {
        Square {
            top: self.proj1.clone(),
            left: self.proj2.clone(),
            right: self.f.clone(),
            bottom: self.g.clone(),
        }
    }
}

/// A square
/// ```text
///   P --top--> X
///   |          |
///  left      right
///   v          v
///   Y --bottom-> Z
/// ```
#[derive(Clone, Debug)]
pub struct Square {
    pub top: FinMap,
    pub left: FinMap,
    pub right: FinMap,
    pub bottom: FinMap,
}

impl Square {
    pub fn new(top: FinMap, left: FinMap, right: FinMap, bottom: FinMap) -> Result<Self> {
        let shape_ok = top.dom() == left.dom()
            && top.cod() == right.dom()
            && left.cod() == bottom.dom()
            && right.cod() == bottom.cod();
        if !shape_ok {
            return Err(Error::CodomainMismatch {
                op: "square",
                left: top.dom().len(),
                right: left.dom().len(),
            });
        }
        Ok(Square { top, left, right, bottom })
    }

    pub fn corner(&self) -> &FinObj {
        self.top.dom()
    }

    /// Ok if `top ≫ right = left ≫ bottom`, otherwise the first witness.
    pub fn check_commutes(&self) -> Result<()> {
        for p in 0..self.corner().len() {
            if self.right.apply(self.top.apply(p)) != self.bottom.apply(self.left.apply(p)) {
                return Err(Error::NonCommuting { witness: self.corner().label(p).clone() });
            }
        }
        Ok(())
    }

    /// The comparison map from the corner into the chosen pullback of (right, bottom).
    pub fn comparison(&self) -> Result<(PullbackResult, FinMap)> {
        self.check_commutes()?;
        let pb = pullback(&self.right, &self.bottom)?;
        let cmp = pb.mediate(&self.top, &self.left)?;
        Ok((pb, cmp))
    }

    /// The unique lift of a cone `x: W → X`, `y: W → Y` into the corner, if the
    /// square is a pullback and the cone commutes.
    pub fn lift(&self, x: &FinMap, y: &FinMap) -> Result<FinMap> {
        let (pb, cmp) = self.comparison()?;
        let inv = cmp
            .inverse()
            .ok_or_else(|| Error::SquareViolation("square is not a pullback".into()))?;
        pb.mediate(x, y)?.compose(&inv)
    }
}

/// True iff the square commutes and its corner is a pullback.
pub fn is_pullback(sq: &Square) -> Result<bool> {
    sq.check_commutes()?;
    let right = sq.right.fiber_sizes();
    let bottom = sq.bottom.fiber_sizes();
    let expected: usize = right.iter().zip(&bottom).map(|(a, b)| a * b).sum();
    if expected != sq.corner().len() {
        return Ok(false);
    }
    let mut seen = std::collections::HashSet::with_capacity(expected);
    Ok((0..sq.corner().len()).all(|p| seen.insert((sq.top.apply(p), sq.left.apply(p)))))
}

/// The pushforward f_* g of `g: Z → E` along `f: E → B`.
///
/// Over each b the elements are the sections s: f⁻¹(b) → Z of g, labelled
/// `(b, ((e₁, s(e₁)), …))` by their full graph.
#[derive(Clone, Debug)]
pub struct PushforwardResult {
    pub f: FinMap,
    pub g: FinMap,
    pub base: FinObj,
    pub total: FinObj,
    pub map: FinMap,
    sections: Vec<Vec<usize>>,
    f_fibers: Vec<Vec<usize>>,
    pos_in_f_fiber: Vec<usize>,
    g_fibers: Vec<Vec<usize>>,
    rank_in_g_fiber: Vec<usize>,
    offsets: Vec<usize>,
}

pub fn pushforward(f: &FinMap, g: &FinMap) -> Result<PushforwardResult> {
    if g.cod() != f.dom() {
        return Err(Error::CodomainMismatch {
            op: "pushforward",
            left: g.cod().len(),
            right: f.dom().len(),
        });
    }
    let f_fibers = f.fibers();
    let g_fibers = g.fibers();
    let mut pos_in_f_fiber = vec![0; f.dom().len()];
    for fiber in &f_fibers {
        for (k, &e) in fiber.iter().enumerate() {
            pos_in_f_fiber[e] = k;
        }
    }
    let mut rank_in_g_fiber = vec![0; g.dom().len()];
    for fiber in &g_fibers {
        for (k, &z) in fiber.iter().enumerate() {
            rank_in_g_fiber[z] = k;
        }
    }
    let mut sections = Vec::new();
    let mut labels = Vec::new();
    let mut base_of = Vec::new();
    let mut offsets = Vec::with_capacity(f.cod().len());
    for (b, fiber) in f_fibers.iter().enumerate() {
        offsets.push(sections.len());
        let choices: Vec<&[usize]> = fiber.iter().map(|&e| g_fibers[e].as_slice()).collect();
        // Odometer with the first fiber element most significant: this is
        // lexicographic order on the section graphs.
        for digits in odometer(&choices.iter().map(|c| c.len()).collect::<Vec<_>>()) {
            let zs: Vec<usize> = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
            let graph = fiber
                .iter()
                .zip(&zs)
                .map(|(&e, &z)| Label::pair(f.dom().label(e).clone(), g.dom().label(z).clone()))
                .collect();
            labels.push(Label::pair(f.cod().label(b).clone(), Label::tuple(graph)));
            sections.push(zs);
            base_of.push(b);
        }
    }
    let total = FinObj::from_sorted(labels);
    let map = FinMap::from_table_unchecked(&total, f.cod(), base_of);
    Ok(PushforwardResult {
        f: f.clone(),
        g: g.clone(),
        base: f.cod().clone(),
        total,
        map,
        sections,
        f_fibers,
        pos_in_f_fiber,
        g_fibers,
        rank_in_g_fiber,
        offsets,
    })
}

/// All digit vectors below the given radices, last digit fastest.
pub(crate) fn odometer(radices: &[usize]) -> Vec<Vec<usize>> {
    if radices.iter().any(|&r| r == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut digits = vec![0; radices.len()];
    loop {
        out.push(digits.clone());
        let mut k = radices.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < radices[k] {
                break;
            }
            digits[k] = 0;
        }
    }
}

impl PushforwardResult {
    /// The fiber f⁻¹(b), in increasing order.
    pub fn fiber(&self, b: usize) -> &[usize] {
        &self.f_fibers[b]
    }

    /// Section values aligned with `fiber(map(p))`.
    pub fn section(&self, p: usize) -> &[usize] {
        &self.sections[p]
    }

    /// The value at `e` of the section encoded by `p`; `e` must lie over `map(p)`.
    pub fn section_at(&self, p: usize, e: usize) -> usize {
        debug_assert_eq!(self.f.apply(e), self.map.apply(p));
        self.sections[p][self.pos_in_f_fiber[e]]
    }

    /// The section as a map f⁻¹(b) → Z on labels.
    pub fn section_graph(&self, p: usize) -> Vec<(Label, Label)> {
        let b = self.map.apply(p);
        self.f_fibers[b]
            .iter()
            .zip(&self.sections[p])
            .map(|(&e, &z)| (self.f.dom().label(e).clone(), self.g.dom().label(z).clone()))
            .collect()
    }

    /// The element over `b` encoding the section with values `zs` (aligned with `fiber(b)`).
    pub fn encode(&self, b: usize, zs: &[usize]) -> Option<usize> {
        let fiber = &self.f_fibers[b];
        if zs.len() != fiber.len() {
            return None;
        }
        let mut index = 0;
        for (&e, &z) in fiber.iter().zip(zs) {
            if self.g.apply(z) != e {
                return None;
            }
            index = index * self.g_fibers[e].len() + self.rank_in_g_fiber[z];
        }
        Some(self.offsets[b] + index)
    }

    /// The transpose of `h: D → f_* Z` under f^* ⊣ f_*: with σ = h ≫ map,
    /// returns the chosen pullback E ×_B D and the map E ×_B D → Z over E.
    pub fn transpose(&self, h: &FinMap) -> Result<(PullbackResult, FinMap)> {
        let sigma = h.compose(&self.map)?;
        let pb = pullback(&self.f, &sigma)?;
        let table = pb.pairs().iter().map(|&(e, d)| self.section_at(h.apply(d), e)).collect();
        let k = FinMap::from_table_unchecked(&pb.apex, self.g.dom(), table);
        Ok((pb, k))
    }

    /// Inverse of [`transpose`](Self::transpose): from `k: E ×_B D → Z` over E
    /// (with `pb = pullback(f, σ)`) to the map D → f_* Z over B.
    pub fn untranspose(&self, pb: &PullbackResult, k: &FinMap) -> Result<FinMap> {
        let sigma = &pb.g;
        if sigma.cod() != &self.base || k.dom() != &pb.apex || k.cod() != self.g.dom() {
            return Err(Error::CodomainMismatch {
                op: "untranspose",
                left: k.dom().len(),
                right: pb.apex.len(),
            });
        }
        let table = (0..sigma.dom().len())
            .map(|d| {
                let b = sigma.apply(d);
                let zs: Vec<usize> = self.f_fibers[b]
                    .iter()
                    .map(|&e| k.apply(pb.index_of(e, d).expect("pair lies in the pullback")))
                    .collect();
                self.encode(b, &zs)
                    .ok_or_else(|| Error::TypeMismatch { witness: sigma.dom().label(d).clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap::from_table_unchecked(sigma.dom(), &self.total, table))
    }

    /// The counit ε: E ×_B f_* Z → Z, (e, s) ↦ s(e).
    pub fn counit(&self) -> Result<(PullbackResult, FinMap)> {
        self.transpose(&FinMap::identity(&self.total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(labels: &[&str]) -> FinObj {
        FinObj::new(labels.iter().map(|s| Label::atom(s))).unwrap()
    }

    fn map(dom: &FinObj, cod: &FinObj, pairs: &[(&str, &str)]) -> FinMap {
        FinMap::from_labels(dom, cod, |l| {
            let key = l.to_string();
            Label::atom(pairs.iter().find(|p| p.0 == key).unwrap().1)
        })
        .unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = FinObj::new(vec![Label::atom("a"), Label::atom("a")]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(l) if l == Label::atom("a")));
    }

    #[test]
    fn compose_tables() {
        let d = obj(&["0", "1"]);
        let ab = obj(&["a", "b"]);
        let p = obj(&["p"]);
        let f = map(&d, &ab, &[("0", "a"), ("1", "b")]);
        let g = map(&ab, &p, &[("a", "p"), ("b", "p")]);
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg, FinMap::constant(&d, &p, 0));
        assert!(matches!(g.compose(&f), Err(Error::CodomainMismatch { .. })));
        let id = FinMap::identity(&ab);
        assert_eq!(id.compose(&g).unwrap(), g);
    }

    #[test]
    fn cycle_inverts() {
        let zero = obj(&["0"]);
        let a = obj(&["a"]);
        let f = map(&zero, &a, &[("0", "a")]);
        let g = map(&a, &zero, &[("a", "0")]);
        assert!(g.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn pullback_example() {
        let d = obj(&["0", "1", "2"]);
        let ab = obj(&["a", "b"]);
        let p = obj(&["p"]);
        let f = map(&d, &ab, &[("0", "a"), ("1", "a"), ("2", "b")]);
        let g = map(&p, &ab, &[("p", "a")]);
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.apex.len(), 2);
        assert_eq!(pb.apex.label(0), &Label::pair(Label::atom("0"), Label::atom("p")));
        assert_eq!(pb.apex.label(1), &Label::pair(Label::atom("1"), Label::atom("p")));
        assert!(is_pullback(&pb.square()).unwrap());
        // along the identity
        let along_id = pullback(&f, &FinMap::identity(&ab)).unwrap();
        assert!(along_id.proj1.is_bijective());
        // over a singleton: product
        let prod = pullback(&bang(&d), &bang(&ab)).unwrap();
        assert_eq!(prod.apex.len(), 6);
    }

    #[test]
    fn is_pullback_detects_bad_corners() {
        let d = obj(&["0", "1", "2"]);
        let ab = obj(&["a", "b"]);
        let f = map(&d, &ab, &[("0", "a"), ("1", "a"), ("2", "b")]);
        let pb = pullback(&f, &f).unwrap();
        // proper subset: drop the last apex element
        let sub = FinObj::new(pb.apex.elements()[..pb.apex.len() - 1].to_vec()).unwrap();
        let incl = FinMap::from_fn(&sub, &pb.apex, |i| i);
        let sq = Square::new(
            incl.compose(&pb.proj1).unwrap(),
            incl.compose(&pb.proj2).unwrap(),
            f.clone(),
            f.clone(),
        )
        .unwrap();
        assert!(!is_pullback(&sq).unwrap());
        // apex plus a duplicate of element 0
        let mut labels = pb.apex.elements().to_vec();
        labels.push(Label::atom("extra"));
        let big = FinObj::new(labels).unwrap();
        let dup = FinMap::from_fn(&big, &pb.apex, |i| if i < pb.apex.len() { i } else { 0 });
        let sq = Square::new(
            dup.compose(&pb.proj1).unwrap(),
            dup.compose(&pb.proj2).unwrap(),
            f.clone(),
            f.clone(),
        )
        .unwrap();
        assert!(!is_pullback(&sq).unwrap());
        // a non-commuting square is an error with a witness
        let swap = FinMap::from_fn(&ab, &ab, |i| 1 - i);
        let sq = Square::new(pb.proj1.clone(), pb.proj2.clone(), f.clone(), f.compose(&swap).unwrap())
            .unwrap();
        assert!(matches!(is_pullback(&sq), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn pushforward_examples() {
        let e = obj(&["e1", "e2"]);
        let b = obj(&["b"]);
        let z = obj(&["z1", "z2", "z3"]);
        let f = bang(&e).compose(&FinMap::from_fn(&terminal(), &b, |_| 0)).unwrap();
        let g = map(&z, &e, &[("z1", "e1"), ("z2", "e2"), ("z3", "e2")]);
        let pf = pushforward(&f, &g).unwrap();
        assert_eq!(pf.total.len(), 2);
        for p in 0..2 {
            let graph = pf.section_graph(p);
            assert_eq!(graph[0], (Label::atom("e1"), Label::atom("z1")));
        }
        // along the identity family: one section per fiber
        let pid = pushforward(&f, &FinMap::identity(&e)).unwrap();
        assert_eq!(pid.total.len(), 1);
        // empty g-fiber over a nonempty f-fiber
        let z1 = obj(&["z1"]);
        let g1 = map(&z1, &e, &[("z1", "e1")]);
        assert_eq!(pushforward(&f, &g1).unwrap().total.len(), 0);
        // empty f-fiber gives the empty section
        let f0 = FinMap::from_fn(&FinObj::empty(), &b, |_| 0);
        let p0 = pushforward(&f0, &FinMap::identity(&FinObj::empty())).unwrap();
        assert_eq!(p0.total.len(), 1);
    }

    #[test]
    fn pushforward_labels_are_canonical() {
        let e = FinObj::canonical(3);
        let b = FinObj::canonical(2);
        let z = FinObj::canonical(5);
        let f = FinMap::from_fn(&e, &b, |i| usize::from(i == 2));
        let g = FinMap::from_fn(&z, &e, |i| [0, 0, 1, 1, 2][i]);
        let pf = pushforward(&f, &g).unwrap();
        let again = FinObj::new(pf.total.elements().to_vec()).unwrap();
        assert_eq!(again, pf.total);
        for p in 0..pf.total.len() {
            let b = pf.map.apply(p);
            assert_eq!(pf.encode(b, pf.section(p)), Some(p));
        }
    }

    #[test]
    fn bang_cases() {
        assert_eq!(bang(&FinObj::empty()).table().len(), 0);
        assert!(bang(&terminal()).is_identity());
        assert_eq!(bang(&FinObj::canonical(2)).table(), &[0, 0]);
    }

    #[test]
    fn json_roundtrip_and_diagnostics() {
        let d = FinObj::canonical(2);
        let c = obj(&["x", "y"]);
        let m = FinMap::from_fn(&d, &c, |i| 1 - i);
        let back = FinMap::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let partial = json!({
            "dom": {"elements": [0, 1]},
            "cod": {"elements": ["x"]},
            "table": {"0": "x"}
        });
        let err = FinMap::from_json(&partial).unwrap_err();
        assert!(matches!(err, Error::PartialTable(l) if l == Label::nat(1)));
        let dup = json!({"elements": ["a", "a"]});
        assert!(matches!(FinObj::from_json(&dup), Err(Error::DuplicateLabel(_))));
    }
}
