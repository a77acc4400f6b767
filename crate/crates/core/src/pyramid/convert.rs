//! Conversions between (k+1)-trees and pyramids over k-space.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::setops::union_at;
use crate::tree::{NodeRef, SpaceSpec, Store};

/// Value of a leaf: its functional value, 1 for a plain black leaf.
pub(crate) fn leaf_value(store: &Store, n: NodeRef) -> Option<f64> {
    if store.is_white(n) {
        None
    } else {
        Some(store.value(n).unwrap_or(1.0))
    }
}

/// Collapses the functional axis of a (k+1)-tree: each support column takes
/// the value of its highest black cell (center of that functional cell).
///
/// `axis` is the 0-based functional axis. Returns the pyramid and its k-space.
pub fn tree_to_pyramid(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    axis: usize,
) -> Result<(NodeRef, SpaceSpec)> {
    if space.k() < 2 {
        return Err(Error::Unsupported("a pyramid needs a (k+1)-space with k >= 1"));
    }
    if axis >= space.dim() {
        return Err(Error::AxisOutOfRange { axis, k: space.k() });
    }
    let out = space.with_k(space.k() - 1)?;
    let half_cell = 0.5 / space.cells_per_axis() as f64;
    struct Ctx<'a> {
        space: &'a SpaceSpec,
        out: SpaceSpec,
        axis: usize,
        half_cell: f64,
        memo: HashMap<(NodeRef, u32, u64), NodeRef>,
    }
    impl Ctx<'_> {
        fn run(&mut self, store: &mut Store, n: NodeRef, level: u32, out_level: u32, fmin: f64, fmax: f64) -> NodeRef {
            if store.is_white(n) {
                return n;
            }
            if store.is_terminal(n) || level == self.space.depth() {
                // Max-union over the virtual cells of a black leaf keeps its top cell.
                return store.valued(fmax - self.half_cell);
            }
            let key = (n, level, fmin.to_bits());
            if let Some(&m) = self.memo.get(&key) {
                return m;
            }
            let (l, r) = store.split(n);
            let m = if self.space.axis(level) == self.axis {
                let mid = (fmin + fmax) / 2.0;
                let pl = self.run(store, l, level + 1, out_level, fmin, mid);
                let pr = self.run(store, r, level + 1, out_level, mid, fmax);
                union_at(store, pl, pr, self.out.depth() - out_level)
            } else {
                let pl = self.run(store, l, level + 1, out_level + 1, fmin, fmax);
                let pr = self.run(store, r, level + 1, out_level + 1, fmin, fmax);
                store.join(pl, pr)
            };
            self.memo.insert(key, m);
            m
        }
    }
    let mut ctx = Ctx { space, out, axis, half_cell, memo: HashMap::new() };
    let p = ctx.run(store, tree, 0, 0, 0.0, 1.0);
    Ok((p, out))
}

/// Each support cell of the pyramid becomes one black cell of a (k+1)-tree
/// whose first axis is the value, quantized to `floor(v * 2^r)`.
pub fn pyramid_to_tree(store: &mut Store, pyramid: NodeRef, space: &SpaceSpec) -> Result<(NodeRef, SpaceSpec)> {
    let out = space.with_k(space.k() + 1)?;
    let cells = out.cells_per_axis();
    struct Ctx<'a> {
        out: &'a SpaceSpec,
        cells: u64,
        memo: HashMap<(NodeRef, u32, u64), NodeRef>,
        slabs: HashMap<(u32, u64, u64), NodeRef>,
    }
    impl Ctx<'_> {
        /// Black exactly where the functional cell is `h`, below `level`.
        fn slab(&mut self, store: &mut Store, level: u32, flo: u64, fhi: u64, h: u64) -> NodeRef {
            if level == self.out.depth() {
                return NodeRef::BLACK;
            }
            if let Some(&m) = self.slabs.get(&(level, flo, h)) {
                return m;
            }
            let m = if self.out.axis(level) == 0 {
                let mid = (flo + fhi) / 2;
                if h < mid {
                    let s = self.slab(store, level + 1, flo, mid, h);
                    store.join(s, NodeRef::WHITE)
                } else {
                    let s = self.slab(store, level + 1, mid, fhi, h);
                    store.join(NodeRef::WHITE, s)
                }
            } else {
                let s = self.slab(store, level + 1, flo, fhi, h);
                store.join(s, s)
            };
            self.slabs.insert((level, flo, h), m);
            m
        }

        fn run(&mut self, store: &mut Store, p: NodeRef, level: u32, flo: u64, fhi: u64) -> Result<NodeRef> {
            if store.is_white(p) {
                return Ok(p);
            }
            if let Some(&m) = self.memo.get(&(p, level, flo)) {
                return Ok(m);
            }
            let m = if store.is_terminal(p) {
                let v = leaf_value(store, p).unwrap_or(1.0);
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::ValueOutOfRange(v));
                }
                let h = ((v * self.cells as f64).floor() as u64).min(self.cells - 1);
                if h < flo || h >= fhi {
                    NodeRef::WHITE
                } else {
                    self.slab(store, level, flo, fhi, h)
                }
            } else if self.out.axis(level) == 0 {
                let mid = (flo + fhi) / 2;
                let l = self.run(store, p, level + 1, flo, mid)?;
                let r = self.run(store, p, level + 1, mid, fhi)?;
                store.join(l, r)
            } else {
                let (pl, pr) = store.split(p);
                let l = self.run(store, pl, level + 1, flo, fhi)?;
                let r = self.run(store, pr, level + 1, flo, fhi)?;
                store.join(l, r)
            };
            self.memo.insert((p, level, flo), m);
            Ok(m)
        }
    }
    let mut ctx = Ctx { out: &out, cells, memo: HashMap::new(), slabs: HashMap::new() };
    let t = ctx.run(store, pyramid, 0, 0, cells)?;
    Ok((t, out))
}

/// Paints every black leaf with `value`.
pub fn colorize(store: &mut Store, tree: NodeRef, value: f64) -> Result<NodeRef> {
    if !value.is_finite() {
        return Err(Error::ValueOutOfRange(value));
    }
    let leaf = store.valued(value);
    let mut memo = HashMap::new();
    Ok(store.map_leaves(tree, &mut memo, &mut |_, n| if n == NodeRef::WHITE { n } else { leaf }))
}

/// The support of a pyramid: its black cells without values.
pub fn support(store: &mut Store, pyramid: NodeRef) -> NodeRef {
    store.support(pyramid)
}
