//! Partial separability classification and multipartite entanglement
//! measures for finite-dimensional quantum states.
//!
//! The crate is organized around three layers:
//! - `lattice`: partitions of subsystem labels, down-set labels
//!   (separability types) and up-set class labels, all pure combinatorics;
//! - `qstate`, `entropy`, `means`, `measures`: states, spectral entropy
//!   functionals, q-sums/q-means, and the pure-state measure hierarchy;
//! - `roof`, `classify`: convex roof extension to mixed states, the
//!   two-qubit Wootters oracle, and class detection.

pub mod bitset;
pub mod classify;
pub mod entropy;
pub mod error;
pub mod lattice;
pub mod means;
pub mod measures;
pub mod qstate;
pub mod roof;

pub use error::{Error, Result};

/// Mean specification over the default scalar type.
pub type MeanSpec64 = means::MeanSpec<f64>;
/// Extended-real q parameter over the default scalar type.
pub type ExtReal64 = means::ExtReal<f64>;
