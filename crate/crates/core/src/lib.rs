//! Desk-scale toolkit for unbounded norm (un) convergence in concrete Banach
//! lattices.
//!
//! The crate provides lattice models ([`lattice`]), sequence diagnostics
//! ([`convergence`]), the disjointification and subsequence-extraction
//! algorithms ([`constructive`]), the neighborhood base of the un-topology
//! ([`topology`]), generators for the classical example sequences
//! ([`gallery`]) and a scenario runner ([`scenario`]).

pub mod constructive;
pub mod convergence;
pub mod diagnostic;
pub mod error;
pub mod gallery;
pub mod json;
pub mod lattice;
pub mod scenario;
pub mod sequence;
pub mod topology;

pub use error::{LatticeError, Result};
