use thiserror::Error;

/// Errors raised by metric construction, the pipeline and the verifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("point {0} is not resolvable by the metric backend")]
    UnknownPoint(usize),

    #[error("vertices {0} and {1} are disconnected")]
    Disconnected(usize, usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("refused: {0}")]
    Refused(String),
}

impl Error {
    /// True for errors caused by the caller's data or parameters, as opposed
    /// to broken internal invariants.
    pub fn is_input(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
