use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable x{index} out of range 1..={nvars}")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("{what}: requested {requested} exceeds cap {limit}")]
    CapExceeded {
        what: String,
        limit: usize,
        requested: usize,
    },

    #[error("degree {degree} exceeds truncation bound {max_degree}")]
    TruncationExceeded { degree: usize, max_degree: usize },

    #[error("not a quadratic form: {0}")]
    NotQuadratic(String),

    #[error("invalid quadratic map: {0}")]
    InvalidMap(String),

    #[error("not a morphism of quadratic maps")]
    NotMorphism,

    #[error("morphism is not injective")]
    NotInjective,

    #[error("morphism is not a normal embedding")]
    NotNormalEmbedding,

    #[error("quadratic map is not Bockstein closed")]
    NotClosed,

    #[error("entries of β(R)+R² do not lie in the span of the q_j")]
    NotRepresentable,

    #[error("module fails the representation identity β(R)+R² = T(q)")]
    NotRepresentation,

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("not an extension of quadratic maps: {0}")]
    NotExtension(String),

    #[error("β² ≠ 0 on {0}; η is not a cocycle")]
    InconsistentEta(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
