//! Exploration of temporal graphs whose snapshots each miss at most `k`
//! edges of some fixed spanning tree.
//!
//! The main entry point is [`scheduler::explore`], which turns a
//! [`TemporalGraph`] into a verified exploration [`scheduler::Schedule`].

pub mod cli;
pub mod error;
pub mod foremost;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod roundabout;
pub mod scheduler;
pub mod tour;
pub mod treefind;

pub use error::{Error, Result};
pub use graph::{Edge, Snapshot, SpanningTree, TemporalGraph, TemporalWalk, Time, Vertex};
