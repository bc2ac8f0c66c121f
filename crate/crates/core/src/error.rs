use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid edge ({source_node}, {target}) in graph of {n} nodes")]
    InvalidEdge {
        source_node: usize,
        target: usize,
        n: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dense Liouvillian needs n <= {cap} (n^4 storage), got n = {n}")]
    TooLarge { n: usize, cap: usize },

    #[error("integration unstable at t = {time}: trace drift {drift:e}; retry with a smaller dt")]
    Unstable { time: f64, drift: f64 },

    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),

    #[error("Liouvillian has {0} eigenvalues at zero; the stationary state is not unique")]
    Degenerate(usize),

    #[error("negative score {score} at node {node}")]
    NegativeScore { node: usize, score: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
