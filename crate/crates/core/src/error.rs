use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("matrix is not symmetric: |M - M^T| = {0:e}")]
    NotSymmetric(f64),

    #[error("eigen iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("eigensolver failed at grid point {point:?}: {source}")]
    GridPoint {
        point: Vec<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error("periodic graph spec is not symmetric: edge ({p}, {q}, {offset:?}) has no reverse")]
    MissingReverseEdge {
        p: usize,
        q: usize,
        offset: Vec<i64>,
    },

    #[error("isolated vertex {0}: the uniform-neighbour walk is undefined")]
    IsolatedVertex(usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("torus of {0} vertices exceeds the 2^20 budget")]
    SizeBudget(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
