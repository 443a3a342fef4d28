use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid xi specification `{spec}`: {reason}")]
    InvalidXi { spec: String, reason: String },

    #[error("1, xi, xi^3 are linearly dependent over Q: {0}")]
    LinearDependence(String),

    /// The enclosures could not separate a comparison before the precision
    /// ceiling was reached.
    #[error("precision ceiling of {ceiling} bits reached while {what} (x0 = {x0})")]
    PrecisionCeiling { ceiling: u32, what: String, x0: String },

    #[error("undecidable at precision ceiling ({0} bits)")]
    Undecidable(u32),

    #[error("point {target} is not in the integer span of {base0} and {base1}")]
    NotInSpan {
        base0: String,
        base1: String,
        target: String,
    },

    #[error("J-valuation of the zero element is undefined")]
    ZeroElement,

    #[error("special family requires ell >= 1, got {0}")]
    InvalidEll(i64),

    #[error("expected a one-dimensional intersection, found dimension {0}")]
    DimensionMismatch(usize),

    #[error("H*P_ell left the expected span: {0}")]
    DecompositionFailure(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
