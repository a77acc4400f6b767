//! Boundaries, homotopic transforms and median filtering.
//!
//! All operators work on the support at a given precision. Only neighbours
//! inside the unit hypercube take part; use [`space_closure`] first to make
//! the outer faces behave as background.

use std::collections::BTreeMap;

use super::adjacency::{search, Policy};
use crate::error::Result;
use crate::setops::{self, BoolOp};
use crate::tree::{apply_cells, assert_at, black_cells, code_cell, Coords, Metric, NodeRef, SpaceSpec, Store};

/// Morphological operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphOp {
    Erode,
    Dilate,
    Open,
    Close,
}

/// Whiten every cell lying on an outer face of the hypercube.
pub fn space_closure(store: &mut Store, tree: NodeRef, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    let depth = space.depth_at(precision)?;
    let mut t = assert_at(store, tree, space, precision)?;
    for axis in 0..space.dim() {
        for upper in [false, true] {
            t = whiten_face(store, t, space, 0, depth, axis, upper);
        }
    }
    Ok(t)
}

fn whiten_face(
    store: &mut Store,
    n: NodeRef,
    space: &SpaceSpec,
    level: u32,
    depth: u32,
    axis: usize,
    upper: bool,
) -> NodeRef {
    if store.is_white(n) {
        return n;
    }
    if level >= depth {
        return NodeRef::WHITE;
    }
    let (l, r) = store.split(n);
    if space.axis(level) != axis {
        let nl = whiten_face(store, l, space, level + 1, depth, axis, upper);
        let nr = whiten_face(store, r, space, level + 1, depth, axis, upper);
        store.join(nl, nr)
    } else if upper {
        let nr = whiten_face(store, r, space, level + 1, depth, axis, upper);
        store.join(l, nr)
    } else {
        let nl = whiten_face(store, l, space, level + 1, depth, axis, upper);
        store.join(nl, r)
    }
}

/// Contacts between the set and its background at one precision.
pub(crate) struct Contrast {
    /// Support cut at the precision.
    pub set: NodeRef,
    /// Black cell code -> number of white neighbours inside the space.
    pub inner: BTreeMap<u64, u32>,
    /// White cell code -> number of black neighbours.
    pub outer: BTreeMap<u64, u32>,
}

pub(crate) fn contrast(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    precision: u32,
) -> Result<Contrast> {
    let depth = space.depth_at(precision)?;
    let cut = assert_at(store, tree, space, precision)?;
    let set = store.support(cut);
    let mut inner = BTreeMap::new();
    let mut outer = BTreeMap::new();
    search(store, set, space, depth, metric, Policy::Contrast, |h| {
        let (black, white) = if h.a_black { (h.a.code, h.b.code) } else { (h.b.code, h.a.code) };
        *inner.entry(black).or_insert(0) += 1;
        *outer.entry(white).or_insert(0) += 1;
    });
    Ok(Contrast { set, inner, outer })
}

/// Black cells of a set cut at `precision` that lie on an outer face.
pub(crate) fn border_cells(store: &mut Store, set: NodeRef, space: &SpaceSpec, precision: u32) -> Result<Vec<Coords>> {
    let closed = space_closure(store, NodeRef::BLACK, space, precision)?;
    let shell = setops::boolean(store, BoolOp::Not, closed, None, space, precision)?;
    let on_faces = setops::intersect(store, set, shell, space);
    black_cells(store, on_faces, space, precision)
}

/// Neighbours of a cell lying outside the hypercube.
pub(crate) fn outside_neighbours(cell: &[u32], precision: u32, metric: Metric) -> u32 {
    let max = (1u64 << precision) - 1;
    let ends = |c: u32| u32::from(c == 0) + u32::from(u64::from(c) == max);
    match metric {
        Metric::D1 => cell.iter().map(|&c| ends(c)).sum(),
        Metric::DInf => {
            let k = cell.len() as u32;
            3u32.pow(k) - cell.iter().map(|&c| 3 - ends(c)).product::<u32>()
        }
    }
}

fn paint(
    store: &mut Store,
    space: &SpaceSpec,
    precision: u32,
    codes: impl Iterator<Item = u64>,
    leaf: NodeRef,
) -> Result<NodeRef> {
    let changes: BTreeMap<u64, NodeRef> = codes.map(|c| (c, leaf)).collect();
    apply_cells(store, NodeRef::WHITE, space, precision, &changes)
}

/// Cells of the set having a background neighbour.
pub fn boundary(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    precision: u32,
) -> Result<NodeRef> {
    let c = contrast(store, tree, space, metric, precision)?;
    boundary_of(store, &c, space, precision)
}

fn boundary_of(store: &mut Store, c: &Contrast, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    paint(store, space, precision, c.inner.keys().copied(), NodeRef::BLACK)
}

/// Background cells having a neighbour in the set.
pub fn exo_boundary(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    precision: u32,
) -> Result<NodeRef> {
    let c = contrast(store, tree, space, metric, precision)?;
    paint(store, space, precision, c.outer.keys().copied(), NodeRef::BLACK)
}

fn erode(store: &mut Store, tree: NodeRef, space: &SpaceSpec, metric: Metric, precision: u32) -> Result<NodeRef> {
    let c = contrast(store, tree, space, metric, precision)?;
    let b = boundary_of(store, &c, space, precision)?;
    Ok(setops::diff(store, c.set, b, space))
}

fn dilate(store: &mut Store, tree: NodeRef, space: &SpaceSpec, metric: Metric, precision: u32) -> Result<NodeRef> {
    let c = contrast(store, tree, space, metric, precision)?;
    let e = paint(store, space, precision, c.outer.keys().copied(), NodeRef::BLACK)?;
    Ok(setops::union(store, c.set, e, space))
}

/// Erosion, dilation, opening or closing by the unit ball of `metric`.
pub fn morphology(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    op: MorphOp,
    precision: u32,
) -> Result<NodeRef> {
    match op {
        MorphOp::Erode => erode(store, tree, space, metric, precision),
        MorphOp::Dilate => dilate(store, tree, space, metric, precision),
        MorphOp::Open => {
            let e = erode(store, tree, space, metric, precision)?;
            dilate(store, e, space, metric, precision)
        }
        MorphOp::Close => {
            let d = dilate(store, tree, space, metric, precision)?;
            erode(store, d, space, metric, precision)
        }
    }
}

/// Give each boundary and exo-boundary cell the majority status of its
/// neighbours. A tie leaves the cell as it is.
pub fn median_filter(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    precision: u32,
) -> Result<NodeRef> {
    let c = contrast(store, tree, space, metric, precision)?;
    let k = space.dim();
    let all = metric.neighbour_count(space.k());
    let inside = |code: u64| {
        let cell = code_cell(space, precision, code);
        all - outside_neighbours(&cell[..k], precision, metric)
    };
    let mut changes = BTreeMap::new();
    for (&code, &white) in &c.inner {
        if 2 * white > inside(code) {
            changes.insert(code, NodeRef::WHITE);
        }
    }
    for (&code, &black) in &c.outer {
        if 2 * black > inside(code) {
            changes.insert(code, NodeRef::BLACK);
        }
    }
    apply_cells(store, c.set, space, precision, &changes)
}
