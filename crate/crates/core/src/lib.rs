//! Distributed-memory breadth-first search over a 1-D block partitioned graph.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the CSR graph, the star / Erdős–Rényi / small-world
//!   generators and the edge-list text format.
//! * [`partition`] maps global vertex ids to owning ranks.
//! * [`transport`] is the message-passing world the per-rank code runs in,
//!   with an in-process channel backend and a TCP socket backend.
//! * [`bfs`] is the level-synchronous traversal itself, plus a serial oracle.
//! * [`bench`] drives strong / weak scaling sweeps and writes CSV.

pub mod bench;
pub mod bfs;
pub mod error;
pub mod graph;
pub mod partition;
pub mod transport;

pub use error::{Error, Result};

/// Global vertex identifier.
pub type VertexId = u64;

/// BFS level (distance from the source in hops).
pub type Level = u64;

/// Level of a vertex the traversal never reached.
pub const UNVISITED: Level = u64::MAX;
