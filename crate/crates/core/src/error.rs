use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series for M({a}, {b}, {z}) did not converge within {terms} terms")]
    NonConvergent { a: f64, b: f64, z: f64, terms: usize },

    #[error("iteration did not converge: {0}")]
    IterationLimit(String),

    #[error("no sign change found below lambda = {ceiling}")]
    NoRootFound { ceiling: f64 },
}

impl Error {
    /// Status tag used in CSV output rows.
    pub fn status(&self) -> &'static str {
        match self {
            Error::NoRootFound { .. } => "no_root",
            _ => "nonconvergent",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
