use thiserror::Error;

use crate::syntax::{line_col, Span};

#[derive(Debug, Error)]
pub enum LangError {
    #[error("{line}:{col}: parse error: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: type error: {msg}")]
    Type { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: universe error: {msg}")]
    Universe { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: the context has no elements to evaluate in")]
    EmptyContext { line: usize, col: usize },
    #[error("{line}:{col}: evaluated to {found}, expected {expected}")]
    Mismatch { line: usize, col: usize, expected: String, found: String },
    #[error("unknown model `{0}`; expected prop or card<k>")]
    UnknownModel(String),
    #[error(transparent)]
    Model(#[from] clan::Error),
}

impl LangError {
    pub fn parse(src: &str, span: Span, msg: impl Into<String>) -> Self {
        let (line, col) = line_col(src, span.start);
        LangError::Parse { line, col, msg: msg.into() }
    }

    pub fn type_error(src: &str, span: Span, msg: impl Into<String>) -> Self {
        let (line, col) = line_col(src, span.start);
        LangError::Type { line, col, msg: msg.into() }
    }

    /// Line and column of the error, when it has a source location.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            LangError::Parse { line, col, .. }
            | LangError::Type { line, col, .. }
            | LangError::Universe { line, col, .. }
            | LangError::EmptyContext { line, col }
            | LangError::Mismatch { line, col, .. } => Some((*line, *col)),
            LangError::UnknownModel(_) | LangError::Model(_) => None,
        }
    }
}
