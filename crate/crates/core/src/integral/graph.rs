//! Hypograph, epigraph and boundary filling.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::setops::{intersect, union_at};
use crate::tree::{assert_at, NodeRef, SpaceSpec, Store};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Sense {
    /// Fill toward lower coordinates.
    Hypo,
    /// Fill toward higher coordinates.
    Epi,
}

/// Lines parallel to `axis` that meet a subtree, spread across its block.
pub(crate) struct Cylinder {
    axis: usize,
    memo: HashMap<(NodeRef, u32), NodeRef>,
}

impl Cylinder {
    pub(crate) fn new(axis: usize) -> Self {
        Cylinder { axis, memo: HashMap::new() }
    }

    pub(crate) fn of(&mut self, store: &mut Store, space: &SpaceSpec, n: NodeRef, level: u32) -> NodeRef {
        if store.is_terminal(n) {
            return if store.is_white(n) { n } else { NodeRef::BLACK };
        }
        if let Some(&m) = self.memo.get(&(n, level)) {
            return m;
        }
        let (l, r) = store.split(n);
        let cl = self.of(store, space, l, level + 1);
        let cr = self.of(store, space, r, level + 1);
        let m = if space.axis(level) == self.axis {
            let u = union_at(store, cl, cr, space.depth() - level - 1);
            store.join(u, u)
        } else {
            store.join(cl, cr)
        };
        self.memo.insert((n, level), m);
        m
    }
}

struct Graph<'a> {
    store: &'a mut Store,
    space: &'a SpaceSpec,
    axis: usize,
    sense: Sense,
    memo: HashMap<(NodeRef, u32), NodeRef>,
    cyl: Cylinder,
}

impl Graph<'_> {
    fn run(&mut self, n: NodeRef, level: u32) -> NodeRef {
        if self.store.is_terminal(n) {
            return if self.store.is_white(n) { n } else { NodeRef::BLACK };
        }
        if let Some(&m) = self.memo.get(&(n, level)) {
            return m;
        }
        let (l, r) = self.store.split(n);
        let gl = self.run(l, level + 1);
        let gr = self.run(r, level + 1);
        let m = if self.space.axis(level) == self.axis {
            let remaining = self.space.depth() - level - 1;
            match self.sense {
                Sense::Hypo => {
                    let c = self.cyl.of(self.store, self.space, r, level + 1);
                    let nl = union_at(self.store, gl, c, remaining);
                    self.store.join(nl, gr)
                }
                Sense::Epi => {
                    let c = self.cyl.of(self.store, self.space, l, level + 1);
                    let nr = union_at(self.store, gr, c, remaining);
                    self.store.join(gl, nr)
                }
            }
        } else {
            self.store.join(gl, gr)
        };
        self.memo.insert((n, level), m);
        m
    }
}

fn graph(store: &mut Store, tree: NodeRef, space: &SpaceSpec, axis: usize, sense: Sense) -> Result<NodeRef> {
    if axis >= space.dim() {
        return Err(Error::AxisOutOfRange { axis, k: space.k() });
    }
    let mut g = Graph { store, space, axis, sense, memo: HashMap::new(), cyl: Cylinder::new(axis) };
    Ok(g.run(tree, 0))
}

/// Cells at or below some black cell of their line along `axis` (0-based).
///
/// Values of a pyramid are dropped.
pub fn hypograph(store: &mut Store, tree: NodeRef, space: &SpaceSpec, axis: usize) -> Result<NodeRef> {
    graph(store, tree, space, axis, Sense::Hypo)
}

/// Cells at or above some black cell of their line along `axis` (0-based).
pub fn epigraph(store: &mut Store, tree: NodeRef, space: &SpaceSpec, axis: usize) -> Result<NodeRef> {
    graph(store, tree, space, axis, Sense::Epi)
}

/// Intersection over all axes of the hypograph and epigraph: regenerates the
/// interior enclosed by a boundary.
pub fn fill(store: &mut Store, tree: NodeRef, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    let t = assert_at(store, tree, space, precision)?;
    let mut acc = NodeRef::BLACK;
    for axis in 0..space.dim() {
        let h = hypograph(store, t, space, axis)?;
        let e = epigraph(store, t, space, axis)?;
        let he = intersect(store, h, e, space);
        acc = intersect(store, acc, he, space);
    }
    Ok(acc)
}
