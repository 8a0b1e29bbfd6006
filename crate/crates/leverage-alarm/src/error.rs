use std::fmt;

/// Errors surfaced by calibration, quadrature, root finding and simulation.
///
/// `InvalidInput` marks violated preconditions (bad domain values, malformed
/// series); everything else is a numerical failure of an otherwise valid
/// request and callers may want to distinguish the two when mapping to
/// process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the inputs was violated.
    InvalidInput(String),
    /// An iteration failed to converge within its budget.
    NonConvergence { what: &'static str, iterations: usize },
    /// Adaptive quadrature exhausted its subdivision budget.
    QuadratureLimit { subdivisions: usize },
    /// A root bracket could not be established or collapsed.
    BracketFailure { lo: f64, hi: f64 },
    /// A non-finite value appeared where a finite one is required.
    NonFinite { what: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NonConvergence { what, iterations } => {
                write!(f, "{what} failed to converge after {iterations} iterations")
            }
            Error::QuadratureLimit { subdivisions } => {
                write!(f, "quadrature exceeded {subdivisions} subdivisions")
            }
            Error::BracketFailure { lo, hi } => {
                write!(f, "no valid bracket on [{lo}, {hi}]")
            }
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True when the error signals bad input rather than a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}
