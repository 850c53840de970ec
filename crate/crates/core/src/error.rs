use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid permutation of length {0}")]
    InvalidPermutation(usize),

    #[error("n = {n} exceeds the factorial-enumeration cap {cap}; the exact permutation average costs O(n^4 n!)")]
    TooLarge { n: usize, cap: usize },

    #[error("polynomial is nonzero at neither requested form: division by the zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("Sturm endpoint {which} is a root of the polynomial; root counting requires f(a) != 0 and f(b) != 0")]
    EndpointZero { which: &'static str },

    #[error("no convergence after {0} evaluations")]
    NoConvergence(usize),

    #[error("sign pattern ambiguous: |entry| = {magnitude:.3e} at column {column} is below 1e-6")]
    AmbiguousSign { column: usize, magnitude: f64 },

    #[error("singular parametrization: lambda_min(Z) too close to 1 ({0})")]
    SingularMap(f64),

    #[error("eigensolver failed on a {0}x{0} matrix")]
    Eigen(usize),

    #[error("all {0} search restarts were rejected")]
    SearchFailed(usize),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
