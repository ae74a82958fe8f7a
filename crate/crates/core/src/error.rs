use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cell count must be at least {min}, got {got}")]
    InvalidCellCount { got: usize, min: usize },

    #[error("cell index {cell} out of range for {n_cells} cells")]
    CellOutOfRange { cell: usize, n_cells: usize },

    #[error("dimension mismatch in {what}: {left} vs {right}")]
    DimensionMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("strategy exhausted")]
    ExhaustedStrategy,

    #[error("fractional digits exhausted")]
    ExhaustedDigits,

    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: usize, base: usize },

    #[error("integral part {integral} out of range [0, 2^{n_cells})")]
    IntegralOutOfRange { integral: u64, n_cells: usize },

    #[error("fraction consists only of digit {max_digit}; it has no canonical form")]
    NonCanonical { max_digit: usize },

    #[error("points lie in different intervals ({left} vs {right})")]
    CrossBoundary { left: u64, right: u64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("orbit hits a non-differentiable grid point at step {step}")]
    ExceptionalOrbit { step: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("capacity exceeded: requested {requested}, available {available}")]
    Capacity { requested: usize, available: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid PGM: {0}")]
    Pgm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
