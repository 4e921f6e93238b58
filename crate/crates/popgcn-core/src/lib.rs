//! Node classification with bootstrapped ensembles of spectral graph
//! convolutional networks over population graphs.
//!
//! The crate is `no_std` (alloc only); IO, file formats, the CLI, and the
//! parallel runners live in the companion `popgcn` crate.
//!
//! Module map:
//! - [`graph`]: weighted graphs, normalized/rescaled Laplacians, Chebyshev
//!   polynomial application, power-iteration spectral bounds.
//! - [`population`]: the sex/site-weighted population graph and its naive
//!   and noisy variants.
//! - [`features`]: ROI time series to Fisher-z connectivity vectors,
//!   standardization, recursive feature elimination.
//! - [`gcnn`]: the Chebyshev-filter network, loss, exact reverse-mode
//!   gradients, full-batch adaptive-moment training.
//! - [`ensemble`]: edge dropout, member seed derivation, independent member
//!   training, consensus fusion.
//! - [`harness`]: synthetic cohorts, stratified k-fold splits, the
//!   experiment matrix and hyperparameter sweep.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ensemble;
pub mod error;
pub mod features;
pub mod gcnn;
pub mod graph;
pub mod harness;
pub mod matrix;
pub mod population;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Edge, ScaledLaplacian, SparseSymMatrix, WeightedGraph};
pub use matrix::{DenseMatrix, FeatureMatrix};
