use std::fmt;

use thiserror::Error;

/// Position inside a curve source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a jet with vanishing constant term")]
    DivisionByZeroJet,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("composition requires an inner jet with zero constant term (got {0})")]
    CompositionOffsetError(f64),
    #[error("jet is not invertible: linear coefficient vanishes")]
    NotInvertibleJet,
    #[error("jet order {requested} exceeds the supported maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },
    #[error("insufficient jet order: need {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("parse error at {location}: {message} (expected one of: {})", expected.join(", "))]
    ParseError {
        location: Location,
        message: String,
        expected: Vec<String>,
    },
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("unknown builtin curve `{0}`")]
    UnknownBuiltin(String),
    #[error("curve declared periodic but endpoints differ by {0:e}")]
    NotPeriodic(f64),
    #[error("parameter {theta} outside the curve domain [{lo}, {hi}]")]
    OutsideDomain { theta: f64, lo: f64, hi: f64 },

    #[error("singular parametrization: speed {0:e} at the expansion point")]
    SingularParametrization(f64),
    #[error("not a good curve: normalized Gram determinant {0:e} at the expansion point")]
    NotGoodCurve(f64),
    #[error("flattening point: last curvature {0:e} vanishes, osculating hypersphere centre at infinity")]
    FlatteningPoint(f64),
    #[error("ill-conditioned focal system (condition number {0:e})")]
    IllConditionedSystem(f64),
    #[error("curvature {index} vanishes; focal curvature recursion undefined")]
    CurvatureZero { index: usize },
    #[error("vertex point: focal curve velocity vanishes (residual {0:e})")]
    VertexPoint(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
