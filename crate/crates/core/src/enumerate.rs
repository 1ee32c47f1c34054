//! Exhaustive enumeration of objects and maps for bounded checks.

use crate::finset::{FinMap, FinObj};

/// Iterates over all choice vectors `v` with `v[k] ∈ choices[k]`, last position fastest.
#[derive(Clone, Debug)]
pub struct Choices {
    choices: Vec<Vec<usize>>,
    digits: Vec<usize>,
    done: bool,
}

impl Choices {
    pub fn new(choices: Vec<Vec<usize>>) -> Self {
        let done = choices.iter().any(Vec::is_empty);
        let digits = vec![0; choices.len()];
        Choices { choices, digits, done }
    }

    pub fn count(choices: &[Vec<usize>]) -> u128 {
        choices.iter().map(|c| c.len() as u128).product()
    }
}

impl Iterator for Choices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().zip(&self.choices).map(|(&d, c)| c[d]).collect();
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < self.choices[k].len() {
                break;
            }
            self.digits[k] = 0;
        }
        Some(out)
    }
}

/// All maps `dom → cod`.
pub fn all_maps(dom: &FinObj, cod: &FinObj) -> impl Iterator<Item = FinMap> {
    let (dom, cod) = (dom.clone(), cod.clone());
    let choices = vec![(0..cod.len()).collect::<Vec<_>>(); dom.len()];
    Choices::new(choices).map(move |t| FinMap::from_table_unchecked(&dom, &cod, t))
}

/// All maps `h: dom σ → dom τ` with `h ≫ τ = σ` (morphisms in the slice over the common base).
pub fn slice_homs(sigma: &FinMap, tau: &FinMap) -> impl Iterator<Item = FinMap> {
    assert_eq!(sigma.cod(), tau.cod(), "slice homs need a common base");
    let fibers = tau.fibers();
    let choices = (0..sigma.dom().len()).map(|d| fibers[sigma.apply(d)].clone()).collect();
    let (dom, cod) = (sigma.dom().clone(), tau.dom().clone());
    Choices::new(choices).map(move |t| FinMap::from_table_unchecked(&dom, &cod, t))
}

pub fn count_slice_homs(sigma: &FinMap, tau: &FinMap) -> u128 {
    let sizes = tau.fiber_sizes();
    (0..sigma.dom().len()).map(|d| sizes[sigma.apply(d)] as u128).product()
}

/// All bijections `a → b` (none unless the sizes agree).
pub fn bijections(a: &FinObj, b: &FinObj) -> Vec<FinMap> {
    if a.len() != b.len() {
        return Vec::new();
    }
    permutations(a.len())
        .into_iter()
        .map(|p| FinMap::from_table_unchecked(a, b, p))
        .collect()
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// The canonical objects {}, {0}, …, {0..n-1}.
pub fn objects_upto(n: usize) -> Vec<FinObj> {
    (0..=n).map(FinObj::canonical).collect()
}

/// All maps between canonical objects of size ≤ n.
pub fn maps_upto(n: usize) -> Vec<FinMap> {
    let objs = objects_upto(n);
    let mut out = Vec::new();
    for a in &objs {
        for b in &objs {
            out.extend(all_maps(a, b));
        }
    }
    out
}

/// All maps into `cod` from canonical objects of size ≤ n.
pub fn maps_into(cod: &FinObj, n: usize) -> Vec<FinMap> {
    objects_upto(n).iter().flat_map(|a| all_maps(a, cod)).collect()
}

/// Non-decreasing maps {0..n-1} → {0..c-1}: one representative for every map
/// into {0..c-1} up to isomorphism of the domain.
pub fn monotone_maps(n: usize, c: usize) -> Vec<FinMap> {
    let dom = FinObj::canonical(n);
    let cod = FinObj::canonical(c);
    let mut out = Vec::new();
    for sizes in compositions(n, c) {
        let table = sizes.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat(b).take(k)).collect();
        out.push(FinMap::from_table_unchecked(&dom, &cod, table));
    }
    out
}

/// Vectors of `parts` naturals summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let a = FinObj::canonical(3);
        let b = FinObj::canonical(2);
        assert_eq!(all_maps(&a, &b).count(), 8);
        assert_eq!(all_maps(&FinObj::empty(), &FinObj::empty()).count(), 1);
        assert_eq!(all_maps(&a, &FinObj::empty()).count(), 0);
        assert_eq!(bijections(&a, &a).len(), 6);
        assert_eq!(monotone_maps(3, 2).len(), 4);
        assert_eq!(compositions(5, 5).len(), 126);
    }

    #[test]
    fn slice_homs_are_exactly_the_maps_over_the_base() {
        let base = FinObj::canonical(2);
        let sigma = FinMap::from_fn(&FinObj::canonical(3), &base, |i| i % 2);
        let tau = FinMap::from_fn(&FinObj::canonical(3), &base, |i| usize::from(i > 0));
        let brute = all_maps(sigma.dom(), tau.dom())
            .filter(|h| h.compose(&tau).unwrap() == sigma)
            .count();
        assert_eq!(slice_homs(&sigma, &tau).count(), brute);
        assert_eq!(count_slice_homs(&sigma, &tau), brute as u128);
    }
}
