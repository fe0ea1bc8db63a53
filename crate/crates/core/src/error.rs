use crate::triple::ParamViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is singular: eigenvalue {eigenvalue:e} is below the relative threshold")]
    Singular { eigenvalue: f64 },
    #[error("invalid parameters: {0}")]
    Params(#[from] ParamViolation),
    #[error("invalid triple: {0}")]
    Triple(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
