use thiserror::Error;

/// Errors raised by the library. Messages are single-line and name the
/// violated precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square and non-empty")]
    NotSquare,
    #[error("matrix is the zero matrix")]
    ZeroMatrix,
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("Perron-Frobenius eigenvalue must exceed 1; got {0}")]
    LambdaNotGreaterThanOne(String),
    #[error("r must exceed max row sum {max}; got {r}")]
    RowSumViolation { max: u64, r: String },
    #[error("slope p/q must satisfy p > M*q with M = {m}; got {p}/{q}")]
    SlopeTooSmall { p: u64, q: u64, m: u64 },
    #[error("slope must have positive numerator and denominator; got {0}")]
    InvalidSlope(String),
    #[error("eigenvalue bracket did not reach tolerance {tol} (radius {radius})")]
    ToleranceNotReached { tol: f64, radius: f64 },
    #[error("exponent {0} is outside the domain [1, inf)")]
    DomainError(String),
    #[error("s = {s} is below (k+1)/k for k = {k}")]
    OutOfRange { s: String, k: u32 },
    #[error("no split q + ell = {k} realises s = {s}")]
    NonRepresentable { s: String, k: u32 },
    #[error("arity must be positive; got {0}")]
    InvalidArity(i64),
    #[error("integer r (q = 1) required; got q = {0}")]
    RationalRNotAllowed(u64),
    #[error("suspension base must be a snowflake group or the Z^2 base")]
    InvalidSuspensionBase,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("cannot parse word: {0}")]
    WordParse(String),
    #[error("cannot parse presentation: {0}")]
    PresentationParse(String),
    #[error("word is not a power of c: {0}")]
    NotACPower(String),
    #[error("word does not equal the target power")]
    NotEqual,
    #[error("ill-formed word: {0}")]
    IllFormed(String),
    #[error("vertex {vertex} out of range 1..={count}")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("index must be positive; got {0}")]
    NonPositiveIndex(i64),
    #[error("need at least 3 data points; got {0}")]
    InsufficientData(usize),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("recursion does not shorten at exponent {0}")]
    NonShortening(i64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
