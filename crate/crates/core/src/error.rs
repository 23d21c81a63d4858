use alloc::string::String;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("result overflows f64: {0}")]
    Overflow(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ladder truncated below the tail-safe order: requested {requested}, need at least {required}")]
    Truncation { requested: usize, required: usize },
    #[error("iteration did not converge after {iterations} steps: {what}")]
    NoConvergence { what: String, iterations: usize },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix dimension {dim} exceeds the dense solver cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("matrix is singular or not positive definite (min eigenvalue {min_eigenvalue:e})")]
    Singular { min_eigenvalue: f64 },
    #[error("grid point lambda = {lambda} lies outside the validity window lambda <= {limit}")]
    GridWindow { lambda: f64, limit: f64 },
    #[error("numerical result {found} misses the analytic value {expected} by more than {tol:e}")]
    Tolerance { found: f64, expected: f64, tol: f64 },
    #[error("domain mask is empty")]
    EmptyDomain,
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain_err {
    ($($arg:tt)*) => {
        $crate::Error::Domain(alloc::format!($($arg)*))
    };
}

macro_rules! precondition_err {
    ($($arg:tt)*) => {
        $crate::Error::Precondition(alloc::format!($($arg)*))
    };
}

pub(crate) use domain_err;
pub(crate) use precondition_err;
