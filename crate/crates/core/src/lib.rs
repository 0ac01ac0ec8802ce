//! Topological analysis of multiscale sequences of partitions.
//!
//! A sequence of partitions assigns one clustering of a fixed ground set to
//! each scale in a list of change points; the sequence need not be
//! hierarchical. This crate builds the bifiltrations of simplicial
//! complexes induced by such a sequence, computes their 0- and
//! 1-dimensional Hilbert-function grids as feature maps, derives conflict
//! measures and Sankey-diagram diagnostics from them, and provides
//! information-theoretic baselines plus synthetic-sequence generators.
//!
//! Everything is immutable after construction and safe to use from multiple
//! threads. The `topoclust` binary exposes the functionality on files of
//! cluster labels; see the crate README for formats.

pub mod baselines;
pub mod bifiltration;
pub mod complex;
pub mod error;
pub mod generators;
pub mod grid;
pub mod io;
pub mod measures;
pub mod partition;
pub mod sankey;

pub use error::{Error, Result};
pub use grid::BigradeGrid;
pub use measures::{Construction, HomologyDim};
pub use partition::{Partition, PartitionSequence};
