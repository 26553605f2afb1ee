//! Construction, verification and exact computation of twin-width contraction
//! sequences.

pub mod bipartite;
pub mod branchdec;
pub mod embed;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod planar;
pub mod sequence;
pub mod spherecut;
pub mod treedec;
pub mod treewidth;
pub mod trigraph;

pub use error::{Error, Result};
pub use graph::Graph;
pub use sequence::{replay, replay_graph, verify, ContractionSequence, Contractor, Step};
pub use trigraph::{Colour, Trigraph, VertexId};
