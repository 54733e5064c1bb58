use thiserror::Error;

/// Errors produced while ingesting graphs or computing partitions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: vertex id {id} out of range for n = {n}")]
    VertexOutOfRange { line: usize, id: u64, n: u64 },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("original edge {edge} is cut by the vertex partition (run edge fixing first)")]
    OriginalEdgeCut { edge: usize },

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("size mismatch: {0}")]
    Mismatch(String),

    #[error("graph is not a simple path or cycle")]
    NotPreset,
}

pub type Result<T> = std::result::Result<T, Error>;
