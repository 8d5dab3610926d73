use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma has a pole at x = {0}")]
    Pole(f64),

    #[error("order {0} is too close to an even integer; the positive derivative degenerates to the classical even-order derivative there")]
    NearEvenOrder(f64),

    #[error("kernel is singular at t = 0")]
    SingularAtZero,

    #[error("invalid order {order}: {reason}")]
    InvalidOrder { order: f64, reason: &'static str },

    #[error("order {0} is an odd integer; the time-domain kernel is not integrable there, use positive-spectral")]
    OddIntegerOrder(f64),

    #[error("order {0} is outside the first branch (0, 1); compose with an integer derivative instead")]
    UnsupportedBranch(f64),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("signal has {got} samples but the grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("signals live on different grids")]
    GridMismatch,

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("unknown signal kind `{0}`")]
    UnknownKind(String),

    #[error("signal kind `{kind}` requires parameter `{param}`")]
    MissingParam { kind: String, param: &'static str },

    #[error("time column is not uniformly spaced (row {row})")]
    NonUniformGrid { row: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("file contains no samples")]
    EmptyFile,

    #[error("test signal is not negligible at the grid ends (edge/max = {ratio:.3e})")]
    SignalNotLocalized { ratio: f64 },

    #[error("integration became unstable at t = {t}; reduce the step")]
    Instability { t: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status for the command-line front-end: 3 for numerical
    /// failures, 2 for everything the caller could have validated up front.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Instability { .. } | Error::SignalNotLocalized { .. } => 3,
            _ => 2,
        }
    }
}
