use thiserror::Error;

/// Errors raised by every module in the crate.
///
/// Each variant maps onto one of three process exit classes (see
/// [`Error::exit_code`]) so that the command-line front end can report
/// failures with stable codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "negative radicand: 1 - 2*gamma_sim = {radicand} for gamma_sim = {gamma_sim}; \
         the literal cosine-to-radius conversion is only defined for gamma_sim <= 0.5, \
         so published settings such as gamma = 0.7 are incompatible with it \
         (use the standard chord-length mode)"
    )]
    NegativeRadicand { gamma_sim: f64, radicand: f64 },

    #[error("row {index} has zero norm; cosine similarity is undefined")]
    ZeroNorm { index: usize },

    #[error("kernel is not positive semidefinite: smallest eigenvalue {min_eigenvalue}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("integration did not reach tolerance {tolerance}: estimated error {estimate}")]
    Integration { tolerance: f64, estimate: f64 },

    #[error("training diverged at step {step}: loss = {loss}")]
    Divergence { step: usize, loss: f64 },

    #[error("non-finite state: {0}")]
    NonFinite(String),

    #[error("window {window} invalid for {sentences} sentences (need 1 <= w <= k-1)")]
    Window { window: usize, sentences: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 usage, 3 domain/validation, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Eigen(_)
            | Error::Integration { .. }
            | Error::Divergence { .. }
            | Error::NonFinite(_) => 4,
            _ => 3,
        }
    }

    /// Stable machine-readable identifier for the error class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Domain(_) => "domain",
            Error::NegativeRadicand { .. } => "negative_radicand",
            Error::ZeroNorm { .. } => "zero_norm",
            Error::NotPsd { .. } => "not_psd",
            Error::InvalidKernel(_) => "invalid_kernel",
            Error::Eigen(_) => "eigensolver",
            Error::Integration { .. } => "integration",
            Error::Divergence { .. } => "divergence",
            Error::NonFinite(_) => "non_finite",
            Error::Window { .. } => "window",
            Error::Degenerate(_) => "degenerate",
            Error::Validation(_) => "validation",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
