use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed mapping spec: {0}")]
    MalformedSpec(String),

    #[error("unknown built-in mapping `{0}`")]
    UnknownName(String),

    #[error("malformed parameters for `{name}`: {reason}")]
    MalformedParams { name: String, reason: String },

    #[error("degenerate map: lambda_F = {lambda:e} < {tol:e} at z = {re}{im:+}i")]
    DegenerateMap { lambda: f64, tol: f64, re: f64, im: f64 },

    #[error("quadrature did not converge within {max_samples} samples")]
    NoConvergence { max_samples: usize },

    #[error("invalid diameter {0}: must be positive")]
    InvalidDiameter(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("map is not analytic (requires p = 1 and all b = 0)")]
    NotAnalytic,

    #[error("function has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("function is not strictly decreasing near r = {at}")]
    NotDecreasing { at: f64 },

    #[error("covering radius {0} is not positive")]
    NonPositiveCover(f64),

    #[error("point {re}{im:+}i lies outside the disk of radius {radius}")]
    OutsideDomain { re: f64, im: f64, radius: f64 },

    #[error("map is not a harmonic polynomial (requires p = 1)")]
    NotHarmonicPolynomial,

    #[error("map does not send the unit disk into itself: boundary sup |f| = {0}")]
    NotIntoDisk(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
