use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max deviation of U†U from I is {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix has a significantly negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),
    #[error("trace {0:.12} is not 1")]
    TraceNotOne(f64),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("certificate is not CERTIFIED (status {0})")]
    NotCertified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
