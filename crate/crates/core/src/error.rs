use alloc::string::String;
use core::fmt;

use crate::rational::ParseRationalError;

/// Domain errors. Argument-shape problems and geometric failures are kept
/// apart so the CLI can map them to different exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Parse(ParseRationalError),
    InvalidArgument(String),
    DimensionMismatch { expected: usize, found: usize },
    NotContained,
    Infeasible,
    Unbounded { ray: alloc::vec::Vec<crate::Q> },
    Boundary,
    NonGeneric(String),
    NotWellSituated(String),
    Closure(String),
    Internal(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotContained => "not_contained",
            Error::Infeasible => "infeasible",
            Error::Unbounded { .. } => "unbounded",
            Error::Boundary => "boundary",
            Error::NonGeneric(_) => "non_generic",
            Error::NotWellSituated(_) => "not_well_situated",
            Error::Closure(_) => "closure_violation",
            Error::Internal(_) => "internal",
        }
    }

    /// Whether the error stems from malformed input rather than geometry.
    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "{e}"),
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotContained => write!(f, "parabolic P is not contained in Q"),
            Error::Infeasible => write!(f, "polyhedron is empty"),
            Error::Unbounded { .. } => write!(f, "polyhedron is unbounded"),
            Error::Boundary => write!(f, "point lies on a boundary hyperplane"),
            Error::NonGeneric(m) => write!(f, "non-generic exponent: {m}"),
            Error::NotWellSituated(m) => write!(f, "not well-situated: {m}"),
            Error::Closure(m) => write!(f, "closure condition fails: {m}"),
            Error::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl From<ParseRationalError> for Error {
    fn from(e: ParseRationalError) -> Self {
        Error::Parse(e)
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
