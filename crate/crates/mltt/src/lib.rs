//! A small Martin-Löf type theory with Unit, Σ, Π and Id, checked by
//! interpretation into finite-set models.

pub mod check;
pub mod error;
pub mod model;
pub mod parse;
pub mod syntax;

pub use check::{check_closed, denote, eval_closed, evaluate, run_program, Checker, Judgment, ProgramReport};
pub use error::LangError;
pub use model::Model;
