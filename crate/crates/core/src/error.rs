use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: problem expects (d1, d2) = ({expected_d1}, {expected_d2}), got ({got_d1}, {got_d2})")]
    DimensionMismatch {
        expected_d1: usize,
        expected_d2: usize,
        got_d1: usize,
        got_d2: usize,
    },

    #[error("component index {index} out of range for {n_components} components")]
    ComponentIndexOutOfRange { index: usize, n_components: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation `{op}` is not supported by problem `{problem}`")]
    Unsupported { op: &'static str, problem: String },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("trace too short: need at least {need} records, got {got}")]
    TraceTooShort { need: usize, got: usize },

    #[error("trace must cover consecutive iterations (record metrics every iteration)")]
    NonConsecutiveTrace,

    #[error("trace records carry no potential values (problem has no exact g/g*)")]
    MissingPotential,

    #[error("nonpositive potential inside the fit window")]
    NonpositivePotential,

    #[error("malformed csv: {0}")]
    CsvFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
