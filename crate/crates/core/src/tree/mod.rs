//! Node arena, spaces and blocks, traversal, construction and serialisation.

pub mod build;
pub mod codec;
pub mod space;
pub mod store;
pub mod traverse;

pub use build::{
    add_cell, add_point, apply_cells, assert_at, black_cells, build_cells, build_from_grid, build_from_values, for_box,
    mass, quantize, rasterize, rasterize_values, Grid,
};
pub use codec::{decode, encode, from_kdt, read_kdt_file, to_kdt, write_kdt_file, TreeCode};
pub use space::{block_of_code, cell_code, code_cell, Block, Coords, Metric, SpaceSpec, MAX_DIM};
pub use store::{Color, Node, NodeRef, Store};
pub use traverse::{compare_traverse, for_each_leaf, traverse, PairVisitor, Visitor};
