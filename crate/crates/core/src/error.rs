use thiserror::Error;

/// Errors raised across the library. Verdicts (ERP / NOT_ERP / UNKNOWN) are
/// data, never errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge endpoint {endpoint} out of range for {vertex_count} vertices")]
    OutOfRangeEndpoint { endpoint: usize, vertex_count: usize },
    #[error("negative count: {0}")]
    NegativeCount(String),
    #[error("invalid fragment: {0}")]
    InvalidFragment(String),
    #[error("fragments have {left} and {right} open ends")]
    LabelCountMismatch { left: usize, right: usize },
    #[error("object too large: {0}")]
    TooLarge(String),
    #[error("graph has {0} circle(s) but no circle value was supplied")]
    CirclesUndefined(usize),
    #[error("vertex degree {degree} exceeds table degree bound {bound}")]
    DegreeExceedsTable { degree: usize, bound: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),
    #[error("supplied factorization does not reproduce B (residual {0:e})")]
    FactorizationMismatch(f64),
    #[error("matrix is not orthogonal (residual {0:e})")]
    NotOrthogonal(f64),
    #[error("target dimension {target} is smaller than point dimension {points}")]
    DimensionTooSmall { target: usize, points: usize },
    #[error("terms {0} and {1} are both within tolerance of a conjugate; pairing is ambiguous")]
    TermsTooClose(usize, usize),
    #[error("model has twin colors {0} and {1}")]
    NotTwinFree(usize, usize),
    #[error("model is not real: {0}")]
    NotRealModel(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Numerical failures map to a distinct CLI exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
