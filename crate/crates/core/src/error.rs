use std::path::PathBuf;

use crate::nodeset::NodeSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pattern has {size} nodes but the instance enumerator is capped at {cap}")]
    PatternTooLarge { size: usize, cap: usize },

    #[error("unknown density notion `{0}`")]
    UnknownNotion(String),

    #[error("unknown world solver `{0}`")]
    UnknownSolver(String),

    #[error("node set must be non-empty")]
    EmptySet,

    #[error("flow capacities overflow 64-bit integers")]
    CapacityOverflow,

    /// More densest subgraphs than the configured cap; `partial` holds the
    /// ones found before stopping.
    #[error("more than {cap} densest subgraphs in one world")]
    EnumerationCap { cap: usize, partial: Vec<NodeSet> },

    #[error("closed-set search explored more than {cap} nodes")]
    MiningCap { cap: usize },

    #[error("graph too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("round {round}: {source}")]
    Round {
        round: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
