//! Hypergraph Laplacian eigenmaps.
//!
//! The crate builds hypergraphs (directly or from point clouds), assembles the
//! combinatorial, symmetric normalized and random-walk hypergraph Laplacians,
//! embeds vertices into the low-eigenvalue eigenvectors of the chosen
//! Laplacian and classifies the embedded points with k-nearest-neighbor or
//! kernel ridge regression. The [`harness`] module wires these pieces into a
//! transductive train/test experiment with JSON and Markdown reports.
//!
//! ```text
//! L     = D_v - H W D_e^{-1} H^T
//! L_sym = I - D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}
//! L_rw  = I - D_v^{-1} H W D_e^{-1} H^T
//! ```

pub mod classify;
pub mod construction;
pub mod error;
pub mod harness;
pub mod hypergraph;
pub mod laplacian;
pub mod spectral;

pub use error::{Error, Result};
pub use hypergraph::{DegreeVectors, Hypergraph};
pub use laplacian::{LaplacianMatrix, Variant};
pub use spectral::{Embedding, SpectralDecomposition};
