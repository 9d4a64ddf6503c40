use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A concrete spectral parameter hit (or came too close to) a point of
    /// the resonance set `4s - 2m ∈ ℕ`.
    #[error("resonance: 4s - 2m = {k} (grade j = {k}) makes the indicial factor vanish at s = {s}")]
    Resonance { k: i64, s: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The numerics could not reach the requested accuracy.
    #[error("precision error: {0}; increase trunc-order or digits")]
    Precision(String),

    #[error("convergence error: {what} (estimate {estimate:.3e} > threshold {threshold:.3e})")]
    Convergence {
        what: String,
        estimate: f64,
        threshold: f64,
    },

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    /// The exact denominator does not split into rational linear factors.
    #[error("denominator does not split over the rationals: {0}")]
    NonSplitting(String),

    #[error("identity failed: {name} (deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    IdentityFailed {
        name: String,
        deviation: f64,
        tolerance: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
