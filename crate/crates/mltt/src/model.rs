//! Elementary models the checker can target.

use std::sync::Arc;

use clan::elementary::{counting_id, counting_pi, counting_sigma, counting_unit, ElemStructures, FiberIndex};
use clan::universe::{build_cardinality_universe, build_propositional_universe, Universe};
use clan::{FinMap, Label};

use crate::error::LangError;

/// Unit, Π, Σ and Id on one universe, with a chosen type for each fiber size.
#[derive(Clone)]
pub struct Model {
    pub name: String,
    pub formers: ElemStructures,
    pub codes: Arc<FiberIndex>,
}

impl Model {
    fn counting(name: String, universe: Universe) -> Self {
        let codes = Arc::new(FiberIndex::new(universe));
        let formers = ElemStructures {
            unit: counting_unit(&codes),
            pi: counting_pi(&codes, &codes, &codes),
            sigma: counting_sigma(&codes, &codes, &codes),
            id: counting_id(&codes),
        };
        Model { name, formers, codes }
    }

    /// Types ⊥ and ⊤ with one term of ⊤.
    pub fn propositional() -> Self {
        Self::counting("prop".into(), build_propositional_universe())
    }

    /// One type for each size 0..=k.
    pub fn cardinality(k: usize) -> Self {
        Self::counting(format!("card{k}"), build_cardinality_universe(k))
    }

    /// `prop` or `card<k>`.
    pub fn by_name(name: &str) -> Result<Self, LangError> {
        if name == "prop" {
            return Ok(Self::propositional());
        }
        name.strip_prefix("card")
            .and_then(|k| k.parse().ok())
            .map(Self::cardinality)
            .ok_or_else(|| LangError::UnknownModel(name.to_string()))
    }

    pub fn universe(&self) -> &Universe {
        &self.codes.universe
    }

    pub fn tp(&self) -> &FinMap {
        self.universe().tp()
    }
}

/// The printed form of a term element: its position label within the fiber.
pub fn print_value(label: &Label) -> String {
    match label {
        Label::Tuple(items) if items.len() == 2 => items[1].to_string(),
        other => other.to_string(),
    }
}
