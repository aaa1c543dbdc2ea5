//! Machinery for partition-universality experiments on sparse random graphs:
//! density oracles, root augmentation, typicality checks for G(N,p), a sparse
//! regularity decomposition, and a monochromatic embedding pipeline for
//! degenerate bounded-degree target graphs.

pub mod bitset;
pub mod colouring;
pub mod density;
pub mod embedder;
pub mod ensemble;
pub mod experiments;
pub mod graph;
pub mod regularity;
pub mod rng;


pub use graph::{Graph, OrderedGraph};
