use thiserror::Error;

/// Errors raised by the estimation and testing routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("length error: {0}")]
    Length(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("series do not overlap: {0}")]
    Alignment(String),
    #[error("duplicate series name `{0}`")]
    DuplicateName(String),
    #[error("regressor matrix is rank deficient (relative pivot {pivot:.3e})")]
    RankDeficient { pivot: f64 },
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("eigenvalue iteration did not converge for a {0}x{0} matrix")]
    ConvergenceFailure(usize),
    #[error("degenerate series `{0}`: no variation to test")]
    DegenerateSeries(String),
    #[error("argument out of tabulated range: {0}")]
    Range(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("restricted coefficient covariance is singular")]
    SingularCovariance,
    #[error("invalid data-generating process: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
