use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A model or order parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested measure is infinite for this model.
    #[error("measure diverges: {0}")]
    Divergent(String),

    /// Estimator configuration is inconsistent with the sample.
    #[error("estimator specification: {0}")]
    Spec(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed textual input (model strings, estimator strings, data files).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the failure was caused by unparseable input rather than by
    /// the values themselves.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Json(_) | Error::Csv(_))
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
