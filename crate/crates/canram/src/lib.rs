//! Canonical Ramsey machinery for k-uniform hypergraphs: pattern
//! classification, density and threshold scales, the canonical copy
//! hypergraph encoding, exact avoidance search, and seeded Monte Carlo
//! threshold experiments.

pub mod cli;
pub mod density;
pub mod encoding;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod localdense;
pub mod patterns;
pub mod solver;

pub use error::{Error, Guards, Result};
pub use graph::{Colouring, Embedding, KGraph, ListAssignment, VertexOrdering};
