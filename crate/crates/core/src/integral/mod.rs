//! Integral operators along the axes, boundary filling and convex hull.

mod graph;
mod hull;

pub(crate) use graph::Cylinder;
pub use graph::{epigraph, fill, hypograph};
pub use hull::convex_hull;
