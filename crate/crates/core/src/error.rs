use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not positive definite: non-positive pivot at index {pivot}")]
    Singular { pivot: usize },

    #[error(
        "normal equations are singular at pivot {pivot} (exact multicollinearity); \
         try fit_ridge with a small positive lambda"
    )]
    Multicollinear { pivot: usize },

    #[error("schema error for column `{column}`: {reason}")]
    Schema { column: String, reason: String },

    #[error("cannot parse `{value}` in row {row}, column `{column}`")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("label `{value}` in row {row}, column `{column}` is not an allowed value")]
    Label {
        row: usize,
        column: String,
        value: String,
    },

    #[error("split error: {0}")]
    Split(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("predictor is constant; slope is undefined")]
    DegeneratePredictor,

    #[error("target is constant; r-squared is undefined")]
    DegenerateTarget,

    #[error("line search found no decrease after {halvings} halvings at iteration {iteration}")]
    StalledDescent {
        iteration: usize,
        halvings: usize,
        /// Parameter vector at the last accepted iterate.
        last_iterate: Vec<f64>,
    },

    #[error("SGD diverged in epoch {epoch} (learning rate {learning_rate})")]
    Divergence { epoch: usize, learning_rate: f64 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable name of the variant, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "DimensionError",
            Error::Singular { .. } => "SingularityError",
            Error::Multicollinear { .. } => "SingularityError",
            Error::Schema { .. } => "SchemaError",
            Error::Parse { .. } => "ParseError",
            Error::Label { .. } => "LabelError",
            Error::Split(_) => "SplitError",
            Error::Parameter(_) => "ParameterError",
            Error::DegeneratePredictor => "DegeneratePredictorError",
            Error::DegenerateTarget => "DegenerateTargetError",
            Error::StalledDescent { .. } => "StalledDescentError",
            Error::Divergence { .. } => "DivergenceError",
            Error::Io { .. } => "IoError",
            Error::Csv(_) => "CsvError",
            Error::Json(_) => "JsonError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
