use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid norm exponent p = {0} (need p >= 1 or infinity)")]
    InvalidNormSpec(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tuple length {0} is not odd")]
    EvenTupleLength(usize),

    #[error("box half-width {k} does not contain target {target}")]
    BoxTooSmall { k: i64, target: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("empty initial support")]
    EmptySupport,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("amplitude integration diverged at t = {t}")]
    IntegrationDiverged { t: f64 },

    #[error("trajectory does not cover t = {t} (covers [0, {end}])")]
    MissingCoverage { t: f64, end: f64 },

    #[error("mode {mode} is not resolved on a grid with {points} points per axis")]
    Aliasing { mode: String, points: usize },

    #[error("split-step solver produced non-finite values at t = {t}")]
    SolverDiverged { t: f64 },

    #[error("sample step {step} exceeds the resolution limit {limit}")]
    Undersampled { step: f64, limit: f64 },

    #[error("no admissible beta for s = {s}: {reason}")]
    InfeasibleRegularity { s: f64, reason: String },

    #[error("no root found: {0}")]
    RootNotFound(String),

    #[error("slope fit is undefined: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, printed by the CLI on failure.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::InvalidNormSpec(_) => "invalid-norm-spec",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::EvenTupleLength(_) => "even-tuple-length",
            Error::BoxTooSmall { .. } => "box-too-small",
            Error::InvalidParameters(_) => "invalid-parameters",
            Error::EmptySupport => "empty-support",
            Error::Unsupported(_) => "unsupported",
            Error::IntegrationDiverged { .. } => "integration-diverged",
            Error::MissingCoverage { .. } => "missing-trajectory-coverage",
            Error::Aliasing { .. } => "aliasing",
            Error::SolverDiverged { .. } => "solver-diverged",
            Error::Undersampled { .. } => "undersampled",
            Error::InfeasibleRegularity { .. } => "infeasible-regularity",
            Error::RootNotFound(_) => "root-not-found",
            Error::DegenerateFit(_) => "degenerate-fit",
            Error::Io(_) => "io-error",
            Error::Json(_) => "invalid-json",
        }
    }
}
