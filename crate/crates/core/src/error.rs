use alloc::boxed::Box;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A job violates `v > 0` or `0 < r <= 1`.
    InvalidJob { index: usize, volume: f64, requirement: f64 },
    /// Breakpoints or values of a piecewise function are malformed.
    InvalidFunction(&'static str),
    /// Two collections that must line up have different lengths.
    LengthMismatch { expected: usize, found: usize },
    /// Two jobs share a volume where pairwise-distinct volumes are required.
    Degenerate { first: usize, second: usize },
    /// A numeric parameter is outside its domain.
    InvalidParameter(&'static str),
    /// An iterative solver ran out of iterations.
    NotConverged { iterations: usize, residual: f64 },
    /// The linear program has no feasible point.
    Infeasible(&'static str),
    /// The simplex method hit its pivot limit or lost numerical footing.
    Solver(&'static str),
    /// A multi-stage pipeline failed in the named stage.
    Stage { stage: &'static str, source: Box<Error> },
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidJob { index, volume, requirement } => write!(
                f,
                "job {index} is invalid (volume {volume}, requirement {requirement}); \
                 need volume > 0 and 0 < requirement <= 1"
            ),
            Error::InvalidFunction(msg) => write!(f, "invalid piecewise function: {msg}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Degenerate { first, second } => {
                write!(f, "jobs {first} and {second} have equal volumes")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NotConverged { iterations, residual } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual:e})"
            ),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::Solver(msg) => write!(f, "solver failure: {msg}"),
            Error::Stage { stage, source } => write!(f, "{stage}: {source}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Stage { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
