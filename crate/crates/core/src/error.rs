use thiserror::Error;

use crate::label::Label;

#[derive(Debug, Error)]
pub enum Error {
    #[error("codomain mismatch in {op}: an object of size {left} meets an object of size {right}")]
    CodomainMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("table has no entry for {0}")]
    PartialTable(Label),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("malformed table: {0}")]
    BadTable(String),
    #[error("square does not commute at {witness}")]
    NonCommuting { witness: Label },
    #[error("term is not of the expected type at {witness}")]
    TypeMismatch { witness: Label },
    #[error("class violation: {0}")]
    ClassViolation(String),
    #[error("search budget exceeded: {candidates} candidates, limit {limit}")]
    SearchBudgetExceeded { candidates: u128, limit: u128 },
    #[error("bounds too tight: {0}")]
    BoundsTooTight(String),
    #[error("triangle over the base does not commute at {witness}")]
    TriangleViolation { witness: Label },
    #[error("lifter returned an invalid lift for cone {cone}")]
    LiftInvalid { cone: String },
    #[error("law violation: {0}")]
    LawViolation(String),
    #[error("square violation: {0}")]
    SquareViolation(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
