//! Decides whether two unicast sessions can coexist in a directed acyclic
//! network under binary linear coding.
//!
//! The decision is cut-based: the edges shared by *every* minimum cut of a
//! session (its bottleneck set) either stay clear of the other session's
//! bottlenecks, in which case the network embeds one of four small solvable
//! networks and carries an explicit XOR code, or a single bottleneck edge
//! dominates both sinks, in which case that edge is returned as a
//! machine-checkable impossibility certificate.

pub mod aset;
pub mod coding;
pub mod dot;
pub mod flow;
pub mod fuzz;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod path;
pub mod solvability;
pub mod witness;

mod par;

pub use graph::{Dag, EdgeId, NodeId};
pub use path::Path;
pub use solvability::{decide, Branch, Decision, Verdict};
