//! Brute-force oracles and generators shared by the integration tests.
#![allow(dead_code)]

use clan::{FinMap, FinObj};
use proptest::prelude::*;

/// Every table dom → cod, written out independently of the library's enumerators.
pub fn every_map(dom: &FinObj, cod: &FinObj) -> Vec<FinMap> {
    let (d, c) = (dom.len(), cod.len());
    if d > 0 && c == 0 {
        return Vec::new();
    }
    let count = c.pow(d as u32);
    (0..count)
        .map(|mut k| {
            let mut table = vec![0; d];
            for slot in table.iter_mut().rev() {
                *slot = k % c.max(1);
                k /= c.max(1);
            }
            FinMap::new(dom.clone(), cod.clone(), table).unwrap()
        })
        .collect()
}

pub fn fiber_size(f: &FinMap, b: usize) -> usize {
    (0..f.dom().len()).filter(|&e| f.apply(e) == b).count()
}

/// A map between canonical sets with |dom| ≤ max_dom and 1 ≤ |cod| ≤ max_cod.
pub fn arb_map(max_dom: usize, max_cod: usize) -> impl Strategy<Value = FinMap> {
    (0..=max_dom, 1..=max_cod).prop_flat_map(|(d, c)| {
        proptest::collection::vec(0..c, d)
            .prop_map(move |t| FinMap::new(FinObj::canonical(d), FinObj::canonical(c), t).unwrap())
    })
}

/// A map into the given codomain with |dom| ≤ max_dom.
pub fn arb_map_into(cod: FinObj, max_dom: usize) -> impl Strategy<Value = FinMap> {
    let c = cod.len();
    let dom_max = if c == 0 { 0 } else { max_dom };
    (0..=dom_max).prop_flat_map(move |d| {
        let cod = cod.clone();
        proptest::collection::vec(0..c.max(1), d)
            .prop_map(move |t| FinMap::new(FinObj::canonical(t.len()), cod.clone(), t).unwrap())
    })
}
