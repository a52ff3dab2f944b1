use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two vertices have (numerically) the same height in the requested direction.
    #[error("direction {angle} is degenerate: vertices {u} and {v} have tied heights")]
    DegenerateDirection { angle: f64, u: usize, v: usize },

    #[error("vertices {0} and {1} are the same point")]
    DuplicatePoint(usize, usize),

    /// Two difference vectors of the vertex set are parallel.
    #[error("difference vectors ({0}, {1}) and ({2}, {3}) are parallel")]
    ParallelDifferences(usize, usize, usize, usize),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("face closure violated: {0}")]
    FaceClosure(String),

    #[error("construction failed: {0}")]
    Construction(String),

    /// Input complex is not a geometric simplicial complex.
    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("{0}")]
    Rejected(crate::ingest::RejectReason),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
