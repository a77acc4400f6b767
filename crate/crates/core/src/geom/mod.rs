//! Homogeneous matrices, polytopes, primitive shapes and geometric
//! transformations of trees.
//!
//! Points are row vectors: `p' = [p, 1] * M`. Hyperplanes are coefficient
//! columns `h` with `[p, 1] . h` as the signed value, transformed by the
//! inverse matrix. Axes are 0-based.

mod matrix;
mod polytope;
mod shape;
mod transform;
mod view;

pub use matrix::{Elementary, HomMatrix, Transform};
pub use polytope::{polytope_tree, Polytope};
pub use shape::{segment_intersects, shape_tree, Segment, Shape};
pub use transform::{
    hidden_part_removal, project, transform_tree, tree_homographic, tree_symmetry, tree_translate, ViewSense,
};
pub use view::{propagation_area, visible};
