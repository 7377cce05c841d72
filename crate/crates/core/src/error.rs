use thiserror::Error;

use crate::ellis::OpaqueProduct;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode mismatch: cannot combine exact and float coordinates")]
    ModeMismatch,

    #[error("skew depth k must be at least 1")]
    InvalidDepth,

    #[error("base torus dimension m must be at least 1")]
    InvalidBaseDimension,

    #[error("J_{index} is zero")]
    ZeroJEntry { index: usize },

    #[error("J_0 must equal 1, found {found}")]
    JZeroNotOne { found: String },

    #[error("J sequence needs at least {needed} entries, found {found}")]
    ShortJSequence { needed: usize, found: usize },

    #[error("profile needs {needed} entries (Q_1(1)..Q_k(1)), found {found}")]
    ProfileLength { needed: usize, found: usize },

    #[error("recursion fails at (i={i}, l={l})")]
    RecursionFailure { i: usize, l: usize },

    #[error("Q_{index} has degree {degree}, exceeding {index}")]
    DegreeOverflow { index: usize, degree: usize },

    #[error("integrality fails at (i={i}, j={j}): coefficient {value} is not an integer")]
    Integrality { i: usize, j: usize, value: String },

    #[error("coefficient {value} is not an integer")]
    NonIntegral { value: String },

    #[error("generator is symbolic; use the symbolic point API")]
    SymbolicGenerator,

    #[error("{operation} is only available for {required} systems, not {found}")]
    UnsupportedKind {
        operation: &'static str,
        required: &'static str,
        found: &'static str,
    },

    #[error("points must be distinct")]
    IdenticalPoints,

    #[error("N must be at least 1")]
    EmptyRange,

    #[error("checkpoint {value} outside 1..={n}")]
    InvalidCheckpoint { value: u64, n: u64 },

    #[error("character box bound and n_max must be at least 1")]
    InvalidScanRange,

    #[error("multiplier must be nonzero")]
    ZeroMultiplier,

    #[error("elements belong to different systems")]
    ContextMismatch,

    #[error("product involves a formal limit endomorphism and cannot be reduced")]
    FormalComposition(Box<OpaqueProduct>),

    #[error("parse error: {0}")]
    Parse(String),
}
