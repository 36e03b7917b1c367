use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameters fall outside the domain where a construction or formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("the two vertices of a pair must be distinct")]
    IdenticalVertices,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("ell = {ell} outside [1, {diameter}]")]
    EllOutOfRange { ell: u32, diameter: u32 },

    #[error("no prediction exists for ell = {0}; only 1 and 2 are covered")]
    EllUnsupported(u32),

    #[error("symmetry reduction requires a generalized Petersen graph")]
    SymmetryUnavailable,

    #[error("malformed vertex spec {0:?}: expected u<index> or v<index>")]
    VertexSpec(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("time budget exhausted")]
    Timeout,

    #[error("invalid scan request: {0}")]
    InvalidRequest(String),
}
