use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coalgebra is not coaugmented: {0}")]
    NotCoaugmented(String),
    #[error("coalgebra is not conilpotent")]
    NotConilpotent,
    #[error("structure check failed: {0}")]
    Invalid(String),
    #[error("internal degree {jmax} exceeds the truncation bound {bound}")]
    Truncation { jmax: usize, bound: usize },
    #[error("characteristic {characteristic} does not exceed the truncation bound {bound}")]
    UnsupportedCharacteristic { characteristic: u32, bound: usize },
    #[error("not a cocycle in cohomological degree {0}")]
    NotCocycle(usize),
    #[error("resolution is not minimal at step {0}")]
    NotMinimal(usize),
    #[error("sequence is not exact at position {0}")]
    Inexact(usize),
    #[error("graded input not accepted here: {0}")]
    GradedInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
