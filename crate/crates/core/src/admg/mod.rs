//! Acyclic directed mixed graphs and the structural algorithms the
//! estimators and policies rely on.

mod algo;
pub mod catalog;
mod format;
mod graph;
mod project;

pub use format::{parse_graph, write_graph};
pub use graph::{Admg, AdmgBuilder, NodeId, NodeSet, Value};
