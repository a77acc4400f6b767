//! Hierarchical models of k-dimensional sets and functions.
//!
//! A set is stored as a compressed binary tree over the hypercube `[0,1)^k`
//! discretised into `2^r` cells per axis: each level halves one axis in turn,
//! leaves are white (empty) or black (full). A *pyramid* is the same tree with
//! a real value on each black leaf and the maximum of the sons on each
//! internal node.
//!
//! All nodes live in a hash-consed [`Store`](tree::Store); handles are small
//! copyable indices and equal sets have equal handles once normalised.

pub mod attributes;
pub mod error;
pub mod geom;
pub mod integral;
pub mod parsim;
pub mod pyramid;
pub mod script;
pub mod setops;
pub mod topo;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{Metric, NodeRef, SpaceSpec, Store};
