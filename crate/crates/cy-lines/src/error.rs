use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("invalid polynomial: {0}")]
    InvalidPoly(String),

    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,

    #[error("degree-zero polynomial has no roots")]
    ConstantPolynomial,

    #[error("matrix is singular or ill-conditioned (condition number {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("span matrix is rank deficient (second singular value {sigma:.3e})")]
    RankDeficientSpan { sigma: f64 },

    #[error("invalid complete intersection: {0}")]
    InvalidVariety(String),

    #[error("degenerate family parameters: {0}")]
    DegenerateFamily(String),

    #[error("line does not lie on the variety (residual {residual:.3e})")]
    NotOnVariety { residual: f64 },

    #[error("polynomial is not in the ideal of the standard line (residual {residual:.3e})")]
    NotInLineIdeal { residual: f64 },

    #[error("variety is not a Calabi-Yau threefold complete intersection: {0}")]
    NotCalabiYau(String),

    #[error("group closure exceeded the element cap {cap}")]
    GroupCapExceeded { cap: usize },

    #[error("orbit member fails incidence (residual {residual:.3e}); tolerance or group error")]
    OrbitIncidenceFailure { residual: f64 },

    #[error(
        "nullspace dimension {nullity} at syzygy degree 0 is incompatible with a smooth \
         Calabi-Yau threefold at this line"
    )]
    DegenerateSplitting { nullity: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
