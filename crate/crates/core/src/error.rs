use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("vertex `{vertex}`: measure must be finite and strictly positive, got {value}")]
    InvalidMeasure { vertex: String, value: f64 },
    #[error("edge `{from}` -> `{to}`: loops are not allowed")]
    SelfLoop { from: String, to: String },
    #[error("edge `{from}` -> `{to}`: weight must be finite and strictly positive, got {value}")]
    InvalidWeight { from: String, to: String, value: f64 },
    #[error("edge `{from}` -> `{to}` given more than once")]
    DuplicateEdge { from: String, to: String },
    #[error("vertex `{0}` has no incident edge")]
    IsolatedVertex(String),
    #[error("graph is not weakly connected: vertex `{unreachable}` cannot be reached from `{root}`")]
    Disconnected { root: String, unreachable: String },
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid generator spec: {0}")]
    Spec(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector has no normalization")]
    ZeroVector,
    #[error("negative time t = {0}; the semigroup is only defined for t >= 0")]
    NegativeTime(f64),
    #[error("operator of size {n} exceeds the dense limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by malformed input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::TooLarge { .. })
    }
}
