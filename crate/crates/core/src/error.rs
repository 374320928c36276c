use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point {z} lies outside the open unit disc")]
    Domain { z: Complex64 },

    #[error("evaluation hit a singularity at {z}")]
    Singular { z: Complex64 },

    #[error("derivative vanishes (critical point) at {z}")]
    CriticalPoint { z: Complex64 },

    #[error("{what} did not converge: error {achieved:e} above tolerance {requested:e}")]
    NonConvergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("no admissible contour radius near {r}: image of the circle passes through the target")]
    ContourThroughTarget { r: f64 },

    #[error("condition `{criterion}` violated at {z} (margin {margin:e})")]
    ConditionViolated {
        criterion: String,
        z: Complex64,
        margin: f64,
    },

    #[error("degenerate harmonic map at {z}: |dilatation| >= 1")]
    Degenerate { z: Complex64 },

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error at line {line}, column {column}: {message}")]
    Config {
        message: String,
        line: usize,
        column: usize,
    },

    #[error("unknown experiment id `{0}`")]
    UnknownExperiment(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        }
    }
}
