//! Closure operators of digraphs, their solvability graphs, and network
//! coding solvability over finite alphabets.

pub mod cli;
pub mod closure;
pub mod digraph;
pub mod error;
pub mod graph;
pub mod netcode;
pub mod partition;
pub mod reduce;
pub mod set;
pub mod solvegraph;

pub use closure::ClosureOp;
pub use digraph::Digraph;
pub use error::{Error, Result};
pub use graph::Graph;
pub use netcode::NetworkInstance;
pub use partition::{CodingFunction, Partition, Word};
pub use set::VertexSet;
pub use solvegraph::SolvGraph;
