use thiserror::Error;

/// Errors raised by geometric queries and body validation.
///
/// Every variant maps to a stable machine-readable code (see [`GeomError::code`]),
/// which the command-line front end prints as `{"error": CODE}`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polygon is not strictly convex (vertex {0})")]
    NonConvex(usize),
    #[error("boundary is not counterclockwise")]
    NotCcw,
    #[error("body leaves the chart: {0}")]
    OutsideChart(String),
    #[error("curve is not regular near t = {0}")]
    Irregular(f64),
    #[error("polygon needs at least three vertices, got {0}")]
    TooFewVertices(usize),
    #[error("curve passes within the excluded neighbourhood of the origin")]
    NearPole,
    #[error("parameter {0} is a polygon vertex; use a one-sided frame")]
    Vertex(f64),
    #[error("the origin is not interior to the body")]
    OriginNotInterior,
    #[error("invalid root bracket: f(lo) = {0}, f(hi) = {1}")]
    InvalidBracket(f64, f64),
    #[error("point is not strictly inside the domain")]
    NotInterior,
    #[error("operation requires a convex body, got a relaxed closed curve")]
    NotConvexBody,
    #[error("bad input: {0}")]
    BadInput(String),
}

impl GeomError {
    pub fn code(&self) -> &'static str {
        match self {
            GeomError::Domain(_) => "DOMAIN",
            GeomError::NonConvex(_) => "NON_CONVEX",
            GeomError::NotCcw => "NOT_CCW",
            GeomError::OutsideChart(_) => "OUTSIDE_CHART",
            GeomError::Irregular(_) => "IRREGULAR",
            GeomError::TooFewVertices(_) => "TOO_FEW_VERTICES",
            GeomError::NearPole => "NEAR_POLE",
            GeomError::Vertex(_) => "VERTEX",
            GeomError::OriginNotInterior => "ORIGIN_NOT_INTERIOR",
            GeomError::InvalidBracket(..) => "INVALID_BRACKET",
            GeomError::NotInterior => "NOT_INTERIOR",
            GeomError::NotConvexBody => "NOT_CONVEX_BODY",
            GeomError::BadInput(_) => "BAD_INPUT",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GeomError::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
