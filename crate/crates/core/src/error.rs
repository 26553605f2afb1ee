use thiserror::Error;

use crate::trigraph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown or dead vertex {0}")]
    UnknownVertex(VertexId),
    #[error("cannot contract vertex {0} with itself")]
    SelfContraction(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {{{0}, {1}}} is both black and red")]
    ColourConflict(VertexId, VertexId),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid tree decomposition: {0}")]
    InvalidTreeDecomposition(String),
    #[error("invalid branch decomposition: {0}")]
    InvalidBranchDecomposition(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("graph has {n} vertices, above the configured cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("graph must be connected")]
    Disconnected,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("invalid noose: {0}")]
    InvalidNoose(String),
    #[error("neighbourhood classes {count} exceed the bound {bound} for a noose of length {k}")]
    NooseBoundViolated { k: usize, count: usize, bound: usize },
    /// A constructor broke one of its own invariants; this is a bug, not bad input.
    #[error("internal invariant violated at {at}: {msg}")]
    Internal { at: String, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn internal(at: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Internal {
            at: at.into(),
            msg: msg.into(),
        }
    }
}
