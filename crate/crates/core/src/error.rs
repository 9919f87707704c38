use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("query parse error at position {position}: {message}")]
    Query { position: usize, message: String },

    #[error("automaton line {line}: {message}")]
    Automaton { line: usize, message: String },

    #[error(
        "graph has {vertices} vertices, above the dense-matrix limit of {limit}; use an engine-based evaluation instead"
    )]
    Capacity { vertices: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
