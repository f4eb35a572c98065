//! Privacy-preserving synthetic tabular data generation and evaluation.
//!
//! The crate houses the full statistical pipeline for class-labeled tabular
//! cohorts:
//!
//! * [`dataset`] — the in-memory data model: imputation, z-score
//!   normalization, stratified splitting, and a seeded benchmark-cohort
//!   simulator.
//! * [`kde`] — multivariate Gaussian kernel density estimation with
//!   Scott/Silverman bandwidths, log-space density evaluation, and sampling.
//! * [`knn`] — an exact KD-tree backed k-nearest-neighbors classifier used
//!   both as the synthetic-sample validator and as a query engine for the
//!   privacy metric.
//! * [`generate`] — the two synthesis methods: extended SMOTE (fully
//!   synthetic, both classes) and the KDE-KNN rejection pipeline (sample
//!   class-conditional KDEs, keep only candidates the KNN validator assigns
//!   to the generating class).
//! * [`privacy`] — distance-to-closest-record (DCR) reports and the
//!   real-real baseline.
//! * [`eval`] — built-in classifiers (random forest, linear/RBF SVM),
//!   Mann-Whitney AUC, and the three experiment protocols
//!   (real-only, train-on-synthetic, real/synthetic mixing).
//!
//! Everything is deterministic given `(input, seed)`: random state always
//! flows through explicit [`rng::RngKey`] values backed by a counter-based
//! ChaCha8 stream, never through global state. The crate is `no_std`
//! (with `alloc`); IO, file formats, and the CLI live in the companion
//! `privsynth-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod error;
pub mod eval;
pub mod exec;
pub mod generate;
pub mod kde;
pub mod knn;
pub mod matrix;
pub mod privacy;
pub mod rng;

pub use error::Error;
pub use matrix::Matrix;
pub use rng::RngKey;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
