use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("incompatible bases")]
    IncompatibleBases,

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("frequency not in module: no rational multiple of a basis element lies within {tol:e} of {value}")]
    NotInModule { value: f64, tol: f64 },

    #[error("frequency outside lattice; rescale basis")]
    OutsideLattice,

    #[error("aliasing: lattice index {index:?} needs |k| < N/2 with N = {n}; increase N")]
    Aliasing { index: Vec<i64>, n: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid spec mismatch")]
    SpecMismatch,

    #[error("not a character: generator is not unimodular at point {0}")]
    NotACharacter(usize),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
