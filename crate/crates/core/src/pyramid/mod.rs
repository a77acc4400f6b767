//! Pyramids: trees whose black leaves carry functional values, every internal
//! node holding the maximum of its sons.

mod convert;
mod interp;
mod pgm;
mod stats;
mod vote;

pub use convert::{colorize, pyramid_to_tree, support, tree_to_pyramid};
pub use interp::{barycentric_interpolate, interpolate};
pub use pgm::{pyramid_from_pgm, pyramid_to_pgm, Pgm};
pub use stats::{scale, stats, FunctionalStats};
pub use vote::{extend_step, pyramid_extend, pyramid_median_filter, vote};
