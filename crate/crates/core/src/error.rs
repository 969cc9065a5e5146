use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} must be {expected}, got {value}")]
    Domain {
        name: &'static str,
        expected: &'static str,
        value: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("optimizer failed to bracket an interior optimum: {0}")]
    Bracket(String),

    #[error("cutoff {cutoff} captures only {captured} of the probability mass")]
    Cutoff { cutoff: usize, captured: f64 },

    #[error("truncation deficit {deficit:e} at cutoff {cutoff} exceeds {limit:e}")]
    Truncation {
        cutoff: usize,
        deficit: f64,
        limit: f64,
    },

    #[error("matrix is not a valid density matrix: {0}")]
    NotDensity(String),

    #[error("series did not converge: {0}")]
    Series(String),

    #[error("malformed input at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain<T: num_traits::ToPrimitive>(
    name: &'static str,
    expected: &'static str,
    value: T,
) -> Error {
    Error::Domain {
        name,
        expected,
        value: value.to_f64().unwrap_or(f64::NAN),
    }
}
