//! Adjacency search by common-ancestor symmetry descent.
//!
//! Two blocks on either side of the split plane of their lowest common
//! ancestor are descended in parallel. A per-axis flag says how the pair is
//! placed along that axis: aligned (`N`), first block below the second (`S`),
//! or above it (`A`). Along an `S` axis only the facing halves stay in
//! contact; along an `N` axis the halves pair up straight, and under d∞ also
//! diagonally, which introduces new `S`/`A` flags.

use std::collections::HashSet;

use crate::tree::{Block, Metric, NodeRef, SpaceSpec, Store, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flag {
    N,
    S,
    A,
}

pub(crate) type SymVec = [Flag; MAX_DIM];

/// When to stop a parallel descent and what to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Policy {
    /// Pairs of non-white leaves, reported once per leaf pair.
    Leaves,
    /// Pairs of non-white cells at the depth limit.
    Cells,
    /// Pairs of cells of different colours at the depth limit.
    Contrast,
    /// Pairs of cells under different leaves (colour or value) at the depth
    /// limit.
    Values,
}

/// One reported pair. For `Leaves` the blocks are the leaf blocks, otherwise
/// cells at the depth limit.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Hit {
    pub a: Block,
    pub b: Block,
    pub a_black: bool,
    pub sym: SymVec,
    /// Leaves (or depth-limit nodes) holding the two blocks.
    pub a_node: NodeRef,
    pub b_node: NodeRef,
}

impl Hit {
    /// For a face contact, the axis across which the cells touch.
    pub fn face_axis(&self, k: usize) -> Option<usize> {
        let mut it = (0..k).filter(|&a| self.sym[a] != Flag::N);
        match (it.next(), it.next()) {
            (Some(a), None) => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
struct Side {
    node: NodeRef,
    /// Block where the node became terminal; equals the current block while
    /// descending real internal nodes.
    origin: Block,
    terminal: bool,
}

struct Ctx<'a, F: FnMut(&Hit)> {
    store: &'a Store,
    space: &'a SpaceSpec,
    depth: u32,
    metric: Metric,
    policy: Policy,
    emit: F,
}

impl<F: FnMut(&Hit)> Ctx<'_, F> {
    fn side(&self, node: NodeRef, block: Block) -> Side {
        let terminal = self.store.is_terminal(node) || block.level >= self.depth;
        Side { node, origin: block, terminal }
    }

    fn black(&self, s: &Side) -> bool {
        self.store.has_black(s.node)
    }

    fn sons(&self, s: &Side, b: &Block) -> ((Side, Block), (Side, Block)) {
        let (bl, br) = b.children(self.space);
        if s.terminal {
            ((*s, bl), (*s, br))
        } else {
            let (l, r) = self.store.split(s.node);
            ((self.side(l, bl), bl), (self.side(r, br), br))
        }
    }

    fn pair(&mut self, x: Side, bx: Block, y: Side, by: Block, v: SymVec) {
        let level = bx.level;
        let (xb, yb) = (self.black(&x), self.black(&y));
        match self.policy {
            Policy::Leaves => {
                if (x.terminal && !xb) || (y.terminal && !yb) {
                    return;
                }
                if x.terminal && y.terminal {
                    (self.emit)(&Hit {
                        a: x.origin,
                        b: y.origin,
                        a_black: true,
                        sym: v,
                        a_node: x.node,
                        b_node: y.node,
                    });
                    return;
                }
            }
            Policy::Cells => {
                if (x.terminal && !xb) || (y.terminal && !yb) {
                    return;
                }
                if level >= self.depth {
                    (self.emit)(&Hit { a: bx, b: by, a_black: true, sym: v, a_node: x.node, b_node: y.node });
                    return;
                }
            }
            Policy::Contrast => {
                if x.terminal && y.terminal && xb == yb {
                    return;
                }
                if level >= self.depth {
                    (self.emit)(&Hit { a: bx, b: by, a_black: xb, sym: v, a_node: x.node, b_node: y.node });
                    return;
                }
            }
            Policy::Values => {
                if x.terminal && y.terminal && x.node == y.node {
                    return;
                }
                if level >= self.depth {
                    (self.emit)(&Hit { a: bx, b: by, a_black: xb, sym: v, a_node: x.node, b_node: y.node });
                    return;
                }
            }
        }
        let axis = self.space.axis(level);
        let ((xl, bxl), (xr, bxr)) = self.sons(&x, &bx);
        let ((yl, byl), (yr, byr)) = self.sons(&y, &by);
        match v[axis] {
            Flag::N => {
                self.pair(xl, bxl, yl, byl, v);
                self.pair(xr, bxr, yr, byr, v);
                if self.metric == Metric::DInf {
                    let mut s = v;
                    s[axis] = Flag::S;
                    self.pair(xl, bxl, yr, byr, s);
                    let mut a = v;
                    a[axis] = Flag::A;
                    self.pair(xr, bxr, yl, byl, a);
                }
            }
            Flag::S => self.pair(xr, bxr, yl, byl, v),
            Flag::A => self.pair(xl, bxl, yr, byr, v),
        }
    }

    /// Walk every block and pair up the two halves of each split.
    fn walk(&mut self, s: Side, b: Block) {
        if b.level >= self.depth {
            return;
        }
        let descend = match self.policy {
            Policy::Cells => !s.terminal || self.black(&s),
            Policy::Leaves | Policy::Contrast | Policy::Values => !s.terminal,
        };
        if !descend {
            return;
        }
        let ((l, bl), (r, br)) = self.sons(&s, &b);
        let mut v = [Flag::N; MAX_DIM];
        v[self.space.axis(b.level)] = Flag::S;
        self.pair(l, bl, r, br, v);
        self.walk(l, bl);
        self.walk(r, br);
    }
}

/// Run a symmetry descent over the whole tree down to `depth`.
pub(crate) fn search(
    store: &Store,
    root: NodeRef,
    space: &SpaceSpec,
    depth: u32,
    metric: Metric,
    policy: Policy,
    emit: impl FnMut(&Hit),
) {
    let mut ctx = Ctx { store, space, depth, metric, policy, emit };
    let s = ctx.side(root, Block::root());
    ctx.walk(s, Block::root());
}

/// Descent limited to the contacts across the split plane of `block`, whose
/// node is `node`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn search_across(
    store: &Store,
    node: NodeRef,
    block: Block,
    space: &SpaceSpec,
    depth: u32,
    metric: Metric,
    policy: Policy,
    emit: impl FnMut(&Hit),
) {
    let mut ctx = Ctx { store, space, depth, metric, policy, emit };
    let s = ctx.side(node, block);
    if block.level >= depth || s.terminal {
        return;
    }
    let ((l, bl), (r, br)) = ctx.sons(&s, &block);
    let mut v = [Flag::N; MAX_DIM];
    v[space.axis(block.level)] = Flag::S;
    ctx.pair(l, bl, r, br, v);
}

/// Distinct pairs of adjacent non-white leaves, as `(level, code)` keys.
pub(crate) fn leaf_pairs(
    store: &Store,
    root: NodeRef,
    space: &SpaceSpec,
    depth: u32,
    metric: Metric,
) -> Vec<((u32, u64), (u32, u64))> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    search(store, root, space, depth, metric, Policy::Leaves, |h| {
        let p = ((h.a.level, h.a.code), (h.b.level, h.b.code));
        if seen.insert(p) {
            out.push(p);
        }
    });
    out
}

/// Unordered pair of adjacent black cells, identified by their path codes at
/// the search precision (`a < b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdjacencyRecord {
    pub a: u64,
    pub b: u64,
    pub metric: Metric,
}

impl AdjacencyRecord {
    pub fn involves(&self, code: u64) -> bool {
        self.a == code || self.b == code
    }
}

/// Every pair of metric-adjacent black cells at `precision`, once each.
///
/// Internal nodes reached at the precision depth count as black cells.
pub fn adjacencies(
    store: &Store,
    root: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    precision: u32,
) -> crate::Result<Vec<AdjacencyRecord>> {
    let depth = space.depth_at(precision)?;
    let mut out = Vec::new();
    search(store, root, space, depth, metric, Policy::Cells, |h| {
        let (a, b) = if h.a.code < h.b.code { (h.a.code, h.b.code) } else { (h.b.code, h.a.code) };
        out.push(AdjacencyRecord { a, b, metric });
    });
    out.sort();
    Ok(out)
}
