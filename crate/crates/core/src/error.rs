use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("vertex {vertex} is not a vertex of {diagram}")]
    UnknownVertex { vertex: usize, diagram: String },

    #[error("diagram mismatch: {0} vs {1}")]
    DiagramMismatch(String, String),

    #[error("invalid layered word: {0}")]
    InvalidLayering(String),

    #[error("morphism shape mismatch: {0}")]
    Shape(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("zero object has no extremal degree")]
    ZeroObject,

    #[error("not a twist image: {0}")]
    NotATwistImage(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("move rejected: {0}")]
    IllegalMove(String),

    #[error("hypotheses violated: {0}")]
    Hypotheses(String),

    #[error("internal invariant breach: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
