use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("Majorana index {m} out of range 1..={max}")]
    MajoranaIndex { m: usize, max: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("singular transfer matrix: sin(pi*{0}) = 0")]
    SingularTransfer(&'static str),

    #[error("delocalized phase: |lambda| = {0} >= 1")]
    Delocalized(f64),

    #[error("integrable engine requires h = 0 (max |h_j| = {0})")]
    NonIntegrable(f64),

    #[error("model variant mismatch: expected {0}")]
    VariantMismatch(&'static str),

    #[error("size limit exceeded: L = {l} > {cap} for {engine}")]
    SizeLimit { l: usize, cap: usize, engine: &'static str },

    #[error("operator is not Hermitian (phase {0})")]
    NonHermitian(String),

    #[error("empty or too short series: need at least {need}, got {got}")]
    ShortSeries { need: usize, got: usize },

    #[error("frequency window [{lo}, {hi}] does not intersect the grid")]
    Window { lo: f64, hi: f64 },

    #[error("fit did not converge after {iterations} iterations (residuals {history:?})")]
    FitFailed { iterations: usize, history: Vec<f64> },

    #[error("not enough extrema for envelope fit: need {need}, got {got}")]
    TooFewExtrema { need: usize, got: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
