//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range (network has {vertex_count} vertices)")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("self-loop at vertex {vertex} rejected")]
    SelfLoop { vertex: usize },

    #[error("conductance must be positive and finite, got {value}")]
    BadConductance { value: f64 },

    #[error("edge {edge} out of range (network has {edge_count} edges)")]
    InvalidEdge { edge: usize, edge_count: usize },

    #[error("network is disconnected; stranded component starts at vertices {component:?}")]
    Disconnected { component: Vec<usize> },

    #[error("source distribution is not balanced (total strength {total})")]
    Unbalanced { total: f64 },

    #[error("solver did not converge within {iterations} iterations (relative residual {residual})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("{vertices} vertices exceeds the limit of {limit} for {operation}")]
    CapacityExceeded {
        vertices: usize,
        limit: usize,
        operation: &'static str,
    },

    #[error("vertex subset must be nonempty")]
    EmptySubset,

    #[error("vertex {vertex} lies outside the given subset")]
    OutsideSubset { vertex: String },

    #[error("edge sequence is not a closed cycle")]
    OpenChain,

    #[error("{operation} is not supported for lattice kind {kind}")]
    UnsupportedKind {
        kind: String,
        operation: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
