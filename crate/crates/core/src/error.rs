use thiserror::Error;

use crate::model::NodeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("node index {node} out of range for {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("node {node} lists itself as a parent")]
    SelfParent { node: NodeId },
    #[error("expected {expected} families, got {got}")]
    FamilyCount { expected: usize, got: usize },
    #[error("duplicate node name {0:?}")]
    DuplicateName(String),
    #[error("invalid node name {0:?}")]
    InvalidName(String),
    #[error("score {0} is not a finite value or -inf")]
    InvalidScore(f64),
    #[error("scores of node {node} are not additive")]
    NotAdditive { node: NodeId },
    #[error("bound must be at least 1")]
    ZeroBound,
}

/// Text-format error with the 1-based line it was found on.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    /// A size guard tripped; the work was not attempted.
    #[error("refused: {0}")]
    Refused(String),
    /// The input does not meet the solver's contract.
    #[error("precondition failed: {0}")]
    Precondition(String),
}
