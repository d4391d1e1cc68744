use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the toolkit. Numeric tolerances that gate these are
/// fixed repo-wide (see the module docs of `linalg` and `entropy`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M†| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("matrix is not an isometry: max |V†V - I| = {deviation:e}")]
    NotIsometry { deviation: f64 },

    #[error("Kraus set is not trace preserving: max |ΣK†K - I| = {deviation:e} exceeds 1e-9")]
    NotTracePreserving { deviation: f64 },

    #[error("operator is not a state: eigenvalue {eigenvalue:e} below -1e-10")]
    NotAState { eigenvalue: f64 },

    #[error("requested rank {requested} exceeds projector rank {available}")]
    RankTooLarge { requested: usize, available: usize },

    #[error("optimizer diverged: every restart failed its line search")]
    OptimizerDiverged,

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigNotConverged { sweeps: usize },

    #[error("malformed input in field `{field}`: {message}")]
    MalformedInput { field: String, message: String },
}

impl Error {
    pub fn dim_mismatch(msg: impl Into<String>) -> Self {
        Error::DimMismatch(msg.into())
    }

    pub fn bad_shape(msg: impl Into<String>) -> Self {
        Error::BadShape(msg.into())
    }

    pub fn malformed(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::MalformedInput {
            field: field.into(),
            message: message.into(),
        }
    }
}
