use thiserror::Error;

/// Errors raised by the solvers and constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} needs {needed} steps, above the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("cost matrix is not shifted (rows must be nonincreasing)")]
    NotShifted,

    #[error("cost matrix is not anti-shifted (rows must be nondecreasing)")]
    NotAntiShifted,

    #[error("piecewise-linear term is malformed: {0}")]
    MalformedBreakpoints(String),

    #[error("linear optimization oracle returned a vector outside the set: {0:?}")]
    OracleViolation(Vec<i64>),

    #[error("constraint scope {0:?} is not contained in any bag")]
    ScopeNotCovered(Vec<usize>),

    #[error("variable {0} has an empty domain")]
    EmptyDomain(usize),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("constraint row {row} has {support} nonzeros, above the cap of {cap}")]
    SupportTooLarge { row: usize, support: usize, cap: usize },

    #[error("extension is not decomposable: peeling failed with {remaining} summands left")]
    DecomposabilityViolated { remaining: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

pub(crate) fn to_i64(v: u64) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("conversion to i64"))
}
