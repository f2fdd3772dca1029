//! Spanning trees on approximating graphs of symmetric self-similar fractals.
//!
//! Two independent counting paths are provided: the Kirchhoff matrix-tree
//! theorem on the explicitly built graph, and spectral decimation, which
//! derives the spectrum of the probabilistic Laplacian level by level from
//! the first-level graph and never builds the large graphs at all.

pub mod algebra;
pub mod counting;
pub mod decimation;
pub mod error;
pub mod fractal;
pub mod matrix_tree;

pub use error::{Error, Result};
