use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while constructing lotteries and models,
/// evaluating them, or driving the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lottery support is empty")]
    EmptySupport,

    #[error("atom probabilities sum to {sum}; expected 1 within 1e-12")]
    ProbabilitySum { sum: f64 },

    #[error("outcome ({x}, {t}) lies outside domain {domain}")]
    OutOfDomain { x: f64, t: f64, domain: String },

    #[error("lotteries are defined over different domains")]
    DomainMismatch,

    #[error("not a time lottery: support spans more than one prize")]
    NotATimeLottery,

    #[error("unsupported lottery shape: {0}")]
    UnsupportedLotteryShape(String),

    #[error("curvature domain error: {0}")]
    CurvatureDomain(String),

    #[error("discount and value must be strictly positive for the log transform")]
    NonPositiveComponent,

    #[error("{0}")]
    InvalidParameter(String),

    #[error("mode unsupported: {0}")]
    ModeUnsupported(String),

    #[error("bracketing failed, evaluation is not monotone: {0}")]
    NonMonotoneEvaluation(String),

    #[error("solver exceeded {max_iter} iterations (residual {residual:e} > eq_tol {eq_tol:e})")]
    MaxIterExceeded {
        max_iter: usize,
        residual: f64,
        eq_tol: f64,
    },

    #[error("target value is not bracketed by the axis endpoints")]
    Unbracketed,

    #[error("hypothesis failed: {axiom} does not hold for this model")]
    HypothesisFailed { axiom: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
