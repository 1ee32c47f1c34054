//! Finite-set models of dependent type theory.
//!
//! The ambient category is finite sets with chosen pullbacks and pushforwards.
//! On top of it sit classes of maps with bounded axiom checks, polynomial
//! functors, universes, elementary and algebraic type formers, and the
//! translations between the two presentations.

pub mod algebraic;
pub mod elementary;
pub mod enumerate;
pub mod error;
pub mod finset;
pub mod label;
pub mod mapclass;
pub mod poly;
pub mod report;
pub mod translate;
pub mod universe;

pub use error::{Error, Result};
pub use finset::{
    bang, is_pullback, point, pullback, pushforward, terminal, FinMap, FinObj, PullbackResult,
    PushforwardResult, Square,
};
pub use label::Label;
