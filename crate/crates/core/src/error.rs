use thiserror::Error;

use crate::graph::{Edge, Time, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("invalid window [{start}, {end}] for lifetime {lifetime}")]
    InvalidWindow {
        start: Time,
        end: Time,
        lifetime: usize,
    },

    #[error("window length {delta} exceeds lifetime {lifetime}")]
    DeltaExceedsLifetime { delta: usize, lifetime: usize },

    #[error("prefix length {prefix} exceeds lifetime {lifetime}")]
    PrefixExceedsLifetime { prefix: usize, lifetime: usize },

    #[error("underlying graph is disconnected")]
    Disconnected,

    #[error("a DFS tour needs at least two vertices")]
    TrivialTour,

    #[error("roundabout needs {needed} snapshots, got {available}")]
    TooFewSnapshots { needed: usize, available: usize },

    #[error("timeline ends before epoch {epoch} completes ({deficit} more snapshots needed)")]
    InsufficientSnapshots { epoch: usize, deficit: usize },

    #[error(
        "epoch {epoch}: vertex {target} unreachable from {from} within the repositioning window"
    )]
    RepositionFailed {
        epoch: usize,
        from: Vertex,
        target: Vertex,
    },

    #[error("epoch {epoch}: state {state} is not a surviving agent")]
    NotASurvivor { epoch: usize, state: usize },

    #[error("tuple has {got} entries, expected {expected}")]
    TupleArity { expected: usize, got: usize },

    #[error("no covering tuple after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },

    #[error("{tuples} tuples exceed the enumeration cap {cap}; use Las Vegas sampling")]
    EnumerationCapExceeded { tuples: u128, cap: u128 },

    #[error("no covering tuple exists")]
    NoCoveringTuple,

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("roundabout invariant violated at step {step}: {message}")]
    InvariantViolated { step: usize, message: String },

    #[error("edge {0} not present in snapshot {1}")]
    MissingEdge(Edge, Time),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Failures of the algorithm's hypotheses on a well-formed input, as
    /// opposed to malformed input or usage errors.
    pub fn is_algorithmic(&self) -> bool {
        matches!(
            self,
            Error::InsufficientSnapshots { .. }
                | Error::RepositionFailed { .. }
                | Error::AttemptsExhausted { .. }
                | Error::NoCoveringTuple
                | Error::Disconnected
                | Error::TooFewSnapshots { .. }
                | Error::InvariantViolated { .. }
        )
    }
}
