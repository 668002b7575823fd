use thiserror::Error;

/// Errors raised by the library. Every variant names the violated precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("{kappa} does not contain {lambda}")]
    NotContained { kappa: String, lambda: String },

    #[error("parameter {mu} lies within 1e-9 of a pole of the generalized Pochhammer symbol ({detail})")]
    Pole { mu: String, detail: String },

    #[error("series did not converge by degree {degree}: tail bound {tail_bound:e} exceeds tolerance for |value| = {value:e}")]
    NonConvergence {
        degree: u32,
        tail_bound: f64,
        value: f64,
    },

    #[error("singular triangular system: {0}")]
    Singular(String),

    #[error("quadrature and closed form disagree: {quadrature:e} vs {closed_form:e} (relative {relative:e})")]
    Disagreement {
        quadrature: f64,
        closed_form: f64,
        relative: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
