use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("a max-term needs at least one constituent")]
    EmptyMaxTerm,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable x{index} out of range for n = {n} (at position {pos})")]
    VariableOutOfRange { index: usize, n: usize, pos: usize },

    #[error("division by zero in literal at position {pos}")]
    DivisionByZero { pos: usize },

    #[error("{func}() needs at least one argument (at position {pos})")]
    Arity { func: &'static str, pos: usize },

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("expression is not a linear combination of maxima of affine functions")]
    NotALinComb,

    #[error("constituent {0} is not linear (non-zero constant term)")]
    NonHomogeneous(String),

    #[error("operation requires n = {required}, got n = {found}")]
    UnsupportedDimension { required: usize, found: usize },

    #[error("kernel vector rejected: {0}")]
    InvalidKernelVector(String),

    #[error("direction vector must be non-zero")]
    ZeroDirection,

    #[error("network shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("malformed JSON document: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable snake_case tag for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroDimension => "zero_dimension",
            Error::EmptyMaxTerm => "empty_max_term",
            Error::Syntax { .. } => "syntax",
            Error::VariableOutOfRange { .. } => "variable_out_of_range",
            Error::DivisionByZero { .. } => "division_by_zero",
            Error::Arity { .. } => "arity",
            Error::InvalidRational(_) => "invalid_rational",
            Error::NotALinComb => "not_a_lincomb",
            Error::NonHomogeneous(_) => "non_homogeneous",
            Error::UnsupportedDimension { .. } => "unsupported_dimension",
            Error::InvalidKernelVector(_) => "invalid_kernel_vector",
            Error::ZeroDirection => "zero_direction",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::Json(_) => "json",
        }
    }

    /// Position in the input text, for parse errors.
    pub fn position(&self) -> Option<usize> {
        match self {
            Error::Syntax { pos, .. }
            | Error::VariableOutOfRange { pos, .. }
            | Error::DivisionByZero { pos }
            | Error::Arity { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
