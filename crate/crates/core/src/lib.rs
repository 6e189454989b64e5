//! Vertex connectivity of undirected graphs.
//!
//! The main entry point is [`driver::vertex_connectivity`], which combines
//! sparse certificates, max-flow sampling for balanced cuts and local cut
//! detection for unbalanced ones. [`hrg::hrg_vertex_connectivity`] is an
//! exact-with-high-probability preflow baseline.

pub mod driver;
pub mod generators;
pub mod graph;
pub mod hrg;
pub mod localec;
pub mod maxflow;
pub mod search;
pub mod sparsify;

pub use driver::{vertex_connectivity, DriverConfig, VcReport};
pub use graph::{AccessCounters, Graph, SeparationTriple, SplitGraph, Vertex};
pub use localec::{local_ec, LocalEcParams, LocalResult, Outcome, Variant};
