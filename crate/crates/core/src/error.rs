use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("division by zero")]
    DivisionByZero,

    #[error("evaluation at a pole")]
    Pole,

    #[error("rational map is unsuitable: {0}")]
    BadMap(String),

    #[error("polynomial is reducible: {0}")]
    Reducible(String),

    #[error("factorization limit: {0}")]
    FactorLimit(String),

    #[error("malformed schema: {0}")]
    MalformedSchema(String),

    #[error("unknown schema '{0}'")]
    UnknownSchema(String),

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),

    #[error("decimation inapplicable: {0}")]
    DecimationInapplicable(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("verification mismatch: {0}")]
    Mismatch(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
