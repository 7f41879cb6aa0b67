use thiserror::Error;

/// Error type shared by all cellwake modules.
#[derive(Error, Debug)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to reach the requested accuracy.
    /// Carries the best estimate computed so far.
    #[error("accuracy error: {message} (best estimate {best})")]
    Accuracy { message: String, best: f64 },

    /// The request would exceed a hard resource bound (e.g. point counts).
    #[error("resource error: {0}")]
    Resource(String),

    /// A simulation or experiment configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// An estimator could not be formed from the available samples.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// The activation performance index is unbounded (division by q_a = 0).
    #[error("activation performance index is unbounded (q_a = 0)")]
    UnboundedIndex,

    /// Command line / preset usage error.
    #[error("usage error: {0}")]
    Usage(String),

    /// Experiment run failed on every row.
    #[error("run error: {0}")]
    Run(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
