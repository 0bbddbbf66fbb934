use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("polynomial of degree {0} is not accepted here (degree must be at least 2)")]
    DegreeTooSmall(usize),

    #[error("polynomial is not square-free")]
    NonSquareFree,

    #[error("Newton diagram is degenerate: fewer than two nonzero shifted coefficients")]
    DegenerateDiagram,

    #[error("cluster of size {0} is not certified at this point")]
    NotCertified(usize),

    #[error("quantity undefined: {0}")]
    Undefined(&'static str),

    #[error("interval [{lo}, {hi}] is malformed")]
    BadInterval { lo: String, hi: String },

    #[error("oracle input too large: {0} points (limit {1})")]
    OracleScale(usize, usize),

    #[error("point set is not dense")]
    NotDense,

    #[error("integrand is unbounded on the region")]
    Unbounded,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
