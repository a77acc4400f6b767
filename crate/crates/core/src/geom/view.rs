//! Inter-visibility.

use std::collections::BTreeMap;

use super::shape::{segment_intersects, shape_tree, Segment, Shape};
use crate::error::{Error, Result};
use crate::tree::{apply_cells, black_cells, cell_code, quantize, NodeRef, SpaceSpec, Store};

fn cell_of(space: &SpaceSpec, p: &[f64], precision: u32) -> Result<u64> {
    let c = quantize(space, p)?;
    let shift = space.r() - precision;
    let cell: Vec<u32> = c[..space.dim()].iter().map(|v| v >> shift).collect();
    Ok(cell_code(space, precision, &cell))
}

/// True when the segment between the two points crosses no black cell of
/// `tree` at `precision`, ignoring the cells holding the endpoints.
pub fn visible(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    from: &[f64],
    to: &[f64],
    precision: u32,
) -> Result<bool> {
    let a = cell_of(space, from, precision)?;
    let b = cell_of(space, to, precision)?;
    if from == to {
        return Ok(true);
    }
    let changes: BTreeMap<u64, NodeRef> = [(a, NodeRef::WHITE), (b, NodeRef::WHITE)].into_iter().collect();
    let obstacle = apply_cells(store, tree, space, precision, &changes)?;
    Ok(!segment_intersects(store, obstacle, space, &Segment::new(from, to), precision)?)
}

/// Cells within `range` of the emitter that it can see over `terrain`.
pub fn propagation_area(
    store: &mut Store,
    terrain: NodeRef,
    space: &SpaceSpec,
    emitter: &[f64],
    range: f64,
    precision: u32,
) -> Result<NodeRef> {
    let home = cell_of(space, emitter, precision)?;
    let mut changes = BTreeMap::new();
    changes.insert(home, NodeRef::BLACK);
    if range < 0.0 || !range.is_finite() {
        return Err(Error::DegenerateShape("range must be a non-negative number"));
    }
    if range > 0.0 {
        let ball = shape_tree(store, &Shape::Sphere { center: emitter.to_vec(), radius: range }, space, precision)?;
        let scale = 1.0 / f64::from(1u32 << precision);
        for c in black_cells(store, ball, space, precision)? {
            let center: Vec<f64> = c[..space.dim()].iter().map(|&v| (f64::from(v) + 0.5) * scale).collect();
            if visible(store, terrain, space, emitter, &center, precision)? {
                changes.insert(cell_code(space, precision, &c[..space.dim()]), NodeRef::BLACK);
            }
        }
    }
    apply_cells(store, NodeRef::WHITE, space, precision, &changes)
}
