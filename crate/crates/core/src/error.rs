//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by construction, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not elliptic (margin estimate {margin:e})")]
    NonElliptic { margin: f64 },
    #[error("invalid input in `{field}`: {message}")]
    InvalidInput { field: String, message: String },
    #[error("dimension {0} is not supported (numeric paths cover n = 2 and n = 3)")]
    UnsupportedDimension(usize),
    #[error("contour passes too close to a symbol zero (|P| = {modulus:e} at radius {radius})")]
    ContourTooSmall { radius: f64, modulus: f64 },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("operator is not in class l = {l}: {reason}")]
    BadClassIndex { l: u32, reason: String },
    #[error("point at half-sphere boundary: theta . eta = {dot:e}")]
    HalfSphereViolation { dot: f64 },
    #[error("quadrature order {order} is below 2L = {required}")]
    AliasingRisk { order: usize, required: usize },
    #[error("|x| = {radius} exceeds the validity radius {valid}")]
    OutsideValidity { radius: f64, valid: f64 },
    #[error("field evaluation failed at a stencil node")]
    StencilOutOfDomain,
    #[error("point at distance {distance:e} from the boundary (grid spacing {spacing:e})")]
    TooCloseToBoundary { distance: f64, spacing: f64 },
    #[error("kernel has no derivative of order {0:?}")]
    MissingDerivative(Vec<u32>),
    #[error(
        "extrapolation did not converge (last difference {difference:e}, tolerance {tolerance:e})"
    )]
    NoConvergence { difference: f64, tolerance: f64 },
    #[error("test-function support radius {support} exceeds the kernel validity radius {valid}")]
    SupportExceedsValidity { support: f64, valid: f64 },
    #[error("unknown reference kernel `{0}`")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonElliptic { .. } => "NonElliptic",
            Error::InvalidInput { .. } => "InvalidInput",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::ContourTooSmall { .. } => "ContourTooSmall",
            Error::InvariantViolated(_) => "InvariantViolated",
            Error::BadClassIndex { .. } => "BadClassIndex",
            Error::HalfSphereViolation { .. } => "HalfSphereViolation",
            Error::AliasingRisk { .. } => "AliasingRisk",
            Error::OutsideValidity { .. } => "OutsideValidity",
            Error::StencilOutOfDomain => "StencilOutOfDomain",
            Error::TooCloseToBoundary { .. } => "TooCloseToBoundary",
            Error::MissingDerivative(_) => "MissingDerivative",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SupportExceedsValidity { .. } => "SupportExceedsValidity",
            Error::UnknownName(_) => "UnknownName",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
