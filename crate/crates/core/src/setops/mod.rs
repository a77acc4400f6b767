//! Boolean algebra on trees and pyramids, axis-orthogonal slices, and the
//! inductive-limit frames that let trees over different extents be combined.

mod frame;

use std::collections::HashMap;

pub use frame::{il_add, il_boolean, il_create, Dyadic, InductiveFrame};

use crate::error::{Error, Result};
use crate::tree::build::cut;
use crate::tree::{NodeRef, SpaceSpec, Store};

/// Boolean operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    Assert,
    Not,
    Union,
    Intersect,
    /// Symmetric difference.
    Exclude,
    /// `a` minus `b`.
    Diff,
}

impl BoolOp {
    pub fn arity(self) -> usize {
        match self {
            BoolOp::Assert | BoolOp::Not => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoolOp::Assert => "assert",
            BoolOp::Not => "not",
            BoolOp::Union => "union",
            BoolOp::Intersect => "intersect",
            BoolOp::Exclude => "exclude",
            BoolOp::Diff => "diff",
        }
    }
}

/// Apply a Boolean operator at `precision`.
///
/// Operands are read through their upper hull at that precision. On pyramids,
/// union and intersection keep the larger value where both operands are black;
/// negation always yields an unvalued tree.
pub fn boolean(
    store: &mut Store,
    op: BoolOp,
    a: NodeRef,
    b: Option<NodeRef>,
    space: &SpaceSpec,
    precision: u32,
) -> Result<NodeRef> {
    if b.is_some() != (op.arity() == 2) {
        return Err(Error::ArityMismatch { op: op.name(), expected: op.arity() });
    }
    let depth = space.depth_at(precision)?;
    let mut memo = HashMap::new();
    match op {
        BoolOp::Assert => Ok(cut(store, a, depth, &mut HashMap::new())),
        BoolOp::Not => Ok(combine(store, op, a, NodeRef::WHITE, depth, &mut memo)),
        _ => Ok(combine(store, op, a, b.expect("arity checked"), depth, &mut memo)),
    }
}

/// Binary operator on two subtrees positioned on the same block, with
/// `remaining` levels left before the depth limit.
pub(crate) fn combine(
    store: &mut Store,
    op: BoolOp,
    a: NodeRef,
    b: NodeRef,
    remaining: u32,
    memo: &mut HashMap<(NodeRef, NodeRef, u32), NodeRef>,
) -> NodeRef {
    if let Some(r) = shortcut(store, op, a, b, remaining) {
        return r;
    }
    let at = store.is_terminal(a) || remaining == 0;
    let bt = store.is_terminal(b) || remaining == 0;
    if at && bt {
        let ha = store.hull(a);
        let hb = store.hull(b);
        return leaf_op(store, op, ha, hb);
    }
    if let Some(&r) = memo.get(&(a, b, remaining)) {
        return r;
    }
    let (al, ar) = store.split(a);
    let (bl, br) = store.split(b);
    let l = combine(store, op, al, bl, remaining - 1, memo);
    let r = combine(store, op, ar, br, remaining - 1, memo);
    let n = store.join(l, r);
    memo.insert((a, b, remaining), n);
    n
}

fn shortcut(store: &mut Store, op: BoolOp, a: NodeRef, b: NodeRef, remaining: u32) -> Option<NodeRef> {
    let w = NodeRef::WHITE;
    let mut cut_of = |n| cut(store, n, remaining, &mut HashMap::new());
    match op {
        BoolOp::Union | BoolOp::Exclude if a == w => Some(cut_of(b)),
        BoolOp::Union | BoolOp::Exclude | BoolOp::Diff if b == w => Some(cut_of(a)),
        BoolOp::Intersect if a == w || b == w => Some(w),
        BoolOp::Diff if a == w => Some(w),
        BoolOp::Not if a == w => Some(NodeRef::BLACK),
        BoolOp::Not if store.is_terminal(a) => Some(w),
        _ => None,
    }
}

fn leaf_op(store: &mut Store, op: BoolOp, a: NodeRef, b: NodeRef) -> NodeRef {
    let w = NodeRef::WHITE;
    let (ab, bb) = (a != w, b != w);
    let both = |store: &mut Store| match (store.value(a), store.value(b)) {
        (Some(x), Some(y)) => store.valued(x.max(y)),
        (Some(x), None) | (None, Some(x)) => store.valued(x),
        (None, None) => NodeRef::BLACK,
    };
    match op {
        BoolOp::Assert => a,
        BoolOp::Not => {
            if ab {
                w
            } else {
                NodeRef::BLACK
            }
        }
        BoolOp::Union => match (ab, bb) {
            (true, true) => both(store),
            (true, false) => a,
            (false, _) => b,
        },
        BoolOp::Intersect => {
            if ab && bb {
                both(store)
            } else {
                w
            }
        }
        BoolOp::Exclude => match (ab, bb) {
            (true, false) => a,
            (false, true) => b,
            _ => w,
        },
        BoolOp::Diff => {
            if ab && !bb {
                a
            } else {
                w
            }
        }
    }
}

/// Convenience wrappers at full precision.
pub fn union(store: &mut Store, a: NodeRef, b: NodeRef, space: &SpaceSpec) -> NodeRef {
    combine(store, BoolOp::Union, a, b, space.depth(), &mut HashMap::new())
}

pub fn intersect(store: &mut Store, a: NodeRef, b: NodeRef, space: &SpaceSpec) -> NodeRef {
    combine(store, BoolOp::Intersect, a, b, space.depth(), &mut HashMap::new())
}

pub fn diff(store: &mut Store, a: NodeRef, b: NodeRef, space: &SpaceSpec) -> NodeRef {
    combine(store, BoolOp::Diff, a, b, space.depth(), &mut HashMap::new())
}

pub fn exclude(store: &mut Store, a: NodeRef, b: NodeRef, space: &SpaceSpec) -> NodeRef {
    combine(store, BoolOp::Exclude, a, b, space.depth(), &mut HashMap::new())
}

pub fn complement(store: &mut Store, a: NodeRef, space: &SpaceSpec) -> NodeRef {
    combine(store, BoolOp::Not, a, NodeRef::WHITE, space.depth(), &mut HashMap::new())
}

/// Union of two subtrees sitting on the same block at `level`.
pub(crate) fn union_at(store: &mut Store, a: NodeRef, b: NodeRef, remaining: u32) -> NodeRef {
    combine(store, BoolOp::Union, a, b, remaining, &mut HashMap::new())
}

pub(crate) fn diff_at(store: &mut Store, a: NodeRef, b: NodeRef, remaining: u32) -> NodeRef {
    combine(store, BoolOp::Diff, a, b, remaining, &mut HashMap::new())
}

fn check_fixed(space: &SpaceSpec, fixed: &[(usize, u32)]) -> Result<Vec<Option<u32>>> {
    let k = space.dim();
    let mut slots = vec![None; k];
    for &(axis, c) in fixed {
        if axis >= k || slots[axis].is_some() {
            return Err(Error::AxisOutOfRange { axis, k: space.k() });
        }
        if u64::from(c) >= space.cells_per_axis() {
            return Err(Error::CoordOutOfRange { axis, value: f64::from(c) });
        }
        slots[axis] = Some(c);
    }
    if fixed.is_empty() || fixed.len() >= k {
        return Err(Error::AxisOutOfRange { axis: k, k: space.k() });
    }
    Ok(slots)
}

/// Section of a set at fixed coordinates on some axes.
///
/// Returns the tree over the remaining axes (in their original order) and its
/// space.
pub fn slice_extract(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    fixed: &[(usize, u32)],
) -> Result<(NodeRef, SpaceSpec)> {
    let slots = check_fixed(space, fixed)?;
    let sub = space.with_k(space.k() - fixed.len() as u32)?;
    fn rec(store: &mut Store, n: NodeRef, level: u32, space: &SpaceSpec, slots: &[Option<u32>]) -> NodeRef {
        if store.is_terminal(n) || level == space.depth() {
            return store.hull(n);
        }
        let axis = space.axis(level);
        let (l, r) = store.split(n);
        match slots[axis] {
            Some(c) => {
                let bit = space.r() - 1 - space.splits(level, axis);
                let next = if (c >> bit) & 1 == 1 { r } else { l };
                rec(store, next, level + 1, space, slots)
            }
            None => {
                let nl = rec(store, l, level + 1, space, slots);
                let nr = rec(store, r, level + 1, space, slots);
                store.join(nl, nr)
            }
        }
    }
    Ok((rec(store, tree, 0, space, &slots), sub))
}

/// Union of `target` with `slice` placed at the fixed coordinates.
pub fn slice_insert(
    store: &mut Store,
    target: NodeRef,
    space: &SpaceSpec,
    slice: NodeRef,
    fixed: &[(usize, u32)],
) -> Result<NodeRef> {
    let slots = check_fixed(space, fixed)?;
    fn rec(store: &mut Store, s: NodeRef, level: u32, space: &SpaceSpec, slots: &[Option<u32>]) -> NodeRef {
        if s == NodeRef::WHITE || level == space.depth() {
            return store.hull(s);
        }
        let axis = space.axis(level);
        match slots[axis] {
            Some(c) => {
                let bit = space.r() - 1 - space.splits(level, axis);
                let inner = rec(store, s, level + 1, space, slots);
                if (c >> bit) & 1 == 1 {
                    store.join(NodeRef::WHITE, inner)
                } else {
                    store.join(inner, NodeRef::WHITE)
                }
            }
            None => {
                let (l, r) = store.split(s);
                let nl = rec(store, l, level + 1, space, slots);
                let nr = rec(store, r, level + 1, space, slots);
                store.join(nl, nr)
            }
        }
    }
    let embedded = rec(store, slice, 0, space, &slots);
    Ok(union(store, target, embedded, space))
}
