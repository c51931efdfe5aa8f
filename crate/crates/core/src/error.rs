use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("row {row}, field `{field}`: {message}")]
    Parse {
        row: usize,
        field: String,
        message: String,
    },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rank deficient design matrix: column `{column}` is collinear with earlier columns")]
    RankDeficient { column: String },

    #[error("singular correlation matrix")]
    SingularMatrix,

    #[error("zero variance in `{0}`")]
    ZeroVariance(String),

    #[error("{0} did not converge")]
    NonConvergence(String),

    #[error("degenerate comparison: {0}")]
    Degenerate(String),

    #[error("out-of-range prediction: {0}")]
    OutOfRange(String),

    #[error("no rules")]
    NoRules,

    #[error("no firing: aggregated output set has zero mass")]
    NoFiring,

    #[error("empty rule base selected")]
    EmptySelection,

    #[error("training diverged: {0}")]
    Diverged(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True when the error stems from a prediction falling outside the
    /// domain of a model's inverse transform.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::OutOfRange(_) | Error::NoFiring)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
