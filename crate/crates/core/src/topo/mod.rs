//! Adjacency, boundaries, morphology, thinning and connected components.

mod adjacency;
mod label;
mod morph;
mod thin;

pub use adjacency::{adjacencies, AdjacencyRecord};
pub(crate) use adjacency::{search, Policy};
pub use label::{classify, components, extract_component, segment_forest, LabelMethod, Labeling};
pub(crate) use morph::outside_neighbours;
pub use morph::{boundary, exo_boundary, median_filter, morphology, space_closure, MorphOp};
pub use thin::{intrinsic_dimension, median_set, median_set_counted, thin_step};
