//! Balanced edge partitioning of data-affinity graphs.
//!
//! Tasks (edges) that share data objects (vertices) are grouped into `k`
//! equal-size clusters so that each object is loaded by as few clusters as
//! possible. The main route clones every vertex once per incident edge,
//! chains the clones with light auxiliary edges, partitions the clones with a
//! multilevel vertex partitioner, repairs any cut task, and maps the clone
//! clusters back to task clusters.

pub mod baselines;
pub mod edge_fix;
pub mod error;
pub mod graph;
pub mod layout;
pub mod oracle;
pub mod pipeline;
pub mod polish;
pub mod reconstruct;
pub mod synth;
pub mod transform;
pub mod vpart;

pub use error::{Error, Result};
pub use graph::DataAffinityGraph;
pub use reconstruct::{CostReport, EdgePartition};
pub use transform::TransformedGraph;
pub use vpart::VertexPartition;
