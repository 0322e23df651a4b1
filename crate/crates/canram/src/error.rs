use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("uniformity mismatch: {left} vs {right}")]
    UniformityMismatch { left: usize, right: usize },

    #[error("invalid edge {edge:?}: {reason}")]
    InvalidEdge { edge: Vec<usize>, reason: String },

    #[error("duplicate edge {edge:?}")]
    DuplicateEdge { edge: Vec<usize> },

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("colouring does not cover the edge set: expected {expected} colours, got {got}")]
    PartialColouring { expected: usize, got: usize },

    #[error("list assignment does not cover the edge set: expected {expected} lists, got {got}")]
    PartialLists { expected: usize, got: usize },

    #[error("graph must have at least two edges (has {edges})")]
    NotEnoughEdges { edges: usize },

    #[error("graph must have more than {k} vertices (has {vertices})")]
    TooFewVertices { vertices: usize, k: usize },

    #[error("no admissible vertex subset for the density maximum")]
    NoAdmissibleSubset,

    #[error("uniformity {k} not supported: {reason}")]
    UnsupportedUniformity { k: usize, reason: String },

    #[error("projection position {position} out of range [1, {k}]")]
    PositionOutOfRange { position: usize, k: usize },

    #[error("not a permutation of 0..{n}: {seq:?}")]
    NotAPermutation { seq: Vec<usize>, n: usize },

    #[error("colour {colour} on edge {edge:?} is not in its list {list:?}")]
    IncompatibleColour {
        edge: Vec<usize>,
        colour: u64,
        list: Vec<u64>,
    },

    #[error("edge {edge:?} is not an edge of the host graph")]
    ForeignEdge { edge: Vec<usize> },

    #[error("vertex ({edge}, {slot}) is not a vertex of the encoding hypergraph")]
    ForeignEncodingVertex { edge: usize, slot: usize },

    #[error("{what} guard exceeded: needs {needed}, limit {limit}")]
    GuardExceeded {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn guard(what: &str, needed: u128, limit: u128) -> Self {
        Error::GuardExceeded {
            what: what.to_string(),
            needed,
            limit,
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource limits for the exhaustive operations.  `nodes` bounds search-tree
/// nodes and subset scans, `copies` bounds copy enumeration and hyperedge
/// generation work.
#[derive(Debug, Clone, Copy)]
pub struct Guards {
    pub nodes: u64,
    pub copies: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            nodes: 50_000_000,
            copies: 10_000_000,
        }
    }
}
