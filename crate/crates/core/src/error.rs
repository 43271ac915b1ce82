use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("integrand returned a non-finite value at t = {abscissa}")]
    IntegrandFailure { abscissa: f64 },
    #[error("quadrature did not converge: value {value}, error estimate {error:e}")]
    QuadratureNonConvergence { value: String, error: f64 },
    #[error("principal value: {0}")]
    PrincipalValue(String),
    #[error("limit extrapolation diverged: {0}")]
    Divergence(String),
    #[error("root finding failed: {0}")]
    RootNotFound(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("sheet mismatch: {0}")]
    SheetMismatch(String),
    #[error("singular amplitude: {0}")]
    Singular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
