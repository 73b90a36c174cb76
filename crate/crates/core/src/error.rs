use thiserror::Error;

/// Domain errors. Machine-readable codes for the CLI come from `code()`.
#[derive(Error, Debug)]
pub enum Error {
    #[error("not saturated: {0}")]
    NotSaturated(String),
    #[error("not coprime: {0}")]
    NotCoprime(String),
    #[error("not full-dimensional: {0}")]
    NotFullDim(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("not a lattice polytope: {0}")]
    NotLatticePolytope(String),
    #[error("not an empty simplex: {0}")]
    NotEmpty(String),
    #[error("no width-one direction found: {0}")]
    NoWidthOne(String),
    #[error("not half-unimodular: {0}")]
    NotHalfUnimodular(String),
    #[error("no canonical map found: {0}")]
    NoMapFound(String),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("quasipolynomial fit failed validation: {0}")]
    FitMismatch(String),
    #[error("polytopes are not Ehrhart-equivalent")]
    NotEhrhartEquivalent {
        left: Box<crate::ehrhart::QuasiPolynomial>,
        right: Box<crate::ehrhart::QuasiPolynomial>,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSaturated(_) => "NOT_SATURATED",
            Error::NotCoprime(_) => "NOT_COPRIME",
            Error::NotFullDim(_) => "NOT_FULL_DIM",
            Error::DegenerateInput(_) => "DEGENERATE_INPUT",
            Error::NotLatticePolytope(_) => "NOT_LATTICE_POLYTOPE",
            Error::NotEmpty(_) => "NOT_EMPTY",
            Error::NoWidthOne(_) => "NO_WIDTH_ONE",
            Error::NotHalfUnimodular(_) => "NOT_HALF_UNIMODULAR",
            Error::NoMapFound(_) => "NO_MAP_FOUND",
            Error::DegeneratePolygon(_) => "DEGENERATE_POLYGON",
            Error::FitMismatch(_) => "FIT_MISMATCH",
            Error::NotEhrhartEquivalent { .. } => "NOT_EHRHART_EQUIVALENT",
        }
    }
}
