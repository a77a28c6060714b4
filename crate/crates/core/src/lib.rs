//! Tree-cut style graph widths: slim tree-cut width, 0-tree-cut width,
//! edge-cut width and super edge-cut width witnesses.
pub mod approx;
#[cfg(feature = "cli")]
pub mod cli;
pub mod corpus;
pub mod decomp;
pub mod ecw;
pub mod edp;
pub mod graph;
pub mod oracle;
pub mod transform;

pub use decomp::{NodeId, TreeCutDecomposition};
pub use graph::{Edge, MultiGraph, VertexId};
