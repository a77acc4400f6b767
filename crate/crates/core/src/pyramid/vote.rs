//! Majority-vote diffusion and median filtering of labels.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::topo::{outside_neighbours, search, Policy};
use crate::tree::{apply_cells, assert_at, Metric, NodeRef, SpaceSpec, Store};

/// The first value reaching the highest count, in list order.
pub fn vote<T: PartialEq + Copy>(list: &[T]) -> Option<T> {
    let mut best = None;
    let mut best_count = 0;
    for (i, v) in list.iter().enumerate() {
        let n = list[i..].iter().filter(|w| *w == v).count();
        if n > best_count {
            best = Some(*v);
            best_count = n;
        }
    }
    best
}

/// One expansion step: every white cell touching a labeled cell takes the
/// majority label of its labeled neighbours. Returns the new pyramid and the
/// number of cells labeled.
pub fn extend_step(store: &mut Store, pyramid: NodeRef, space: &SpaceSpec, metric: Metric) -> Result<(NodeRef, usize)> {
    let p = space.r();
    let t = assert_at(store, pyramid, space, p)?;
    let mut lists: BTreeMap<u64, Vec<NodeRef>> = BTreeMap::new();
    search(store, t, space, space.depth(), metric, Policy::Values, |h| {
        let (aw, bw) = (h.a_node == NodeRef::WHITE, h.b_node == NodeRef::WHITE);
        if aw && !bw {
            lists.entry(h.a.code).or_default().push(h.b_node);
        } else if bw && !aw {
            lists.entry(h.b.code).or_default().push(h.a_node);
        }
    });
    let changes: BTreeMap<u64, NodeRef> = lists.iter().filter_map(|(&c, l)| vote(l).map(|v| (c, v))).collect();
    let n = changes.len();
    Ok((apply_cells(store, t, space, p, &changes)?, n))
}

/// Repeats [`extend_step`] until every cell of the space is labeled. Returns
/// the pyramid and the number of steps that labeled at least one cell.
pub fn pyramid_extend(
    store: &mut Store,
    pyramid: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
) -> Result<(NodeRef, usize)> {
    if !store.has_black(pyramid) {
        return Err(Error::EmptyPyramid);
    }
    let mut t = pyramid;
    let mut steps = 0;
    loop {
        let (next, n) = extend_step(store, t, space, metric)?;
        if n == 0 {
            return Ok((next, steps));
        }
        t = next;
        steps += 1;
    }
}

/// Every labeled cell takes the majority label among its labeled neighbours.
/// Its own label wins ties.
pub fn pyramid_median_filter(
    store: &mut Store,
    pyramid: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
) -> Result<NodeRef> {
    let p = space.r();
    let t = assert_at(store, pyramid, space, p)?;
    #[derive(Default)]
    struct Cell {
        own: Option<NodeRef>,
        others: Vec<NodeRef>,
        whites: u32,
        coords: Vec<u32>,
    }
    let mut cells: BTreeMap<u64, Cell> = BTreeMap::new();
    let k = space.dim();
    search(store, t, space, space.depth(), metric, Policy::Values, |h| {
        for (me, node, onode) in [(&h.a, h.a_node, h.b_node), (&h.b, h.b_node, h.a_node)] {
            if node == NodeRef::WHITE {
                continue;
            }
            let c = cells.entry(me.code).or_default();
            if c.own.is_none() {
                c.own = Some(node);
                c.coords = me.cell_at(space, p)[..k].to_vec();
            }
            if onode == NodeRef::WHITE {
                c.whites += 1;
            } else {
                c.others.push(onode);
            }
        }
    });
    let total = metric.neighbour_count(space.k());
    let mut changes = BTreeMap::new();
    for (code, c) in cells {
        if c.own.is_none() {
            continue;
        }
        let inside = total - outside_neighbours(&c.coords, p, metric);
        let own_count = inside as usize - c.whites as usize - c.others.len();
        if let Some(best) = vote(&c.others) {
            let best_count = c.others.iter().filter(|&&o| o == best).count();
            if best_count > own_count {
                changes.insert(code, best);
            }
        }
    }
    apply_cells(store, t, space, p, &changes)
}
