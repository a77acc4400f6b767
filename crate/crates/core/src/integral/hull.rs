//! Digital convex hull.
//!
//! The hull of S is the set of cells whose center lies in the convex hull of
//! the centers of S. It is built bottom-up: at every internal node with two
//! non-empty halves, the halves' hulls are joined by the quadrilateral spanned
//! by the two bridges (upper and lower common tangents), and that quadrilateral
//! is digitized into the node. Coordinates are doubled cell units so centers
//! are odd integers and every test is exact.
//!
//! The pairwise descent over the hull marks of the two halves selects, for
//! each node pair, the children holding marks. With bits
//! 1 = lower child of the first half marked, 2 = upper child of the first,
//! 4 = lower child of the second, 8 = upper child of the second:
//!
//! | index          | pairs descended                          |
//! |----------------|------------------------------------------|
//! | 5, 6, 9, 10    | the single marked pair                   |
//! | 7, 11, 13, 14  | the two pairs through the doubled side    |
//! | 15             | all four pairs                           |
//! | others         | symmetric completion, or nothing to join |
//!
//! Here the marked cells are replaced by the corner cells of black leaves,
//! which contain every vertex of a hull, and the pairs that survive are the
//! two bridges.

use crate::error::{Error, Result};
use crate::tree::{assert_at, Block, NodeRef, SpaceSpec, Store};

type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i128 {
    let (ax, ay) = ((a.0 - o.0) as i128, (a.1 - o.1) as i128);
    let (bx, by) = ((b.0 - o.0) as i128, (b.1 - o.1) as i128);
    ax * by - ay * bx
}

/// Counter-clockwise hull vertices without collinear points (monotone chain).
pub(crate) fn convex_polygon(mut pts: Vec<Pt>) -> Vec<Pt> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut h: Vec<Pt> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0 {
            h.pop();
        }
        h.push(p);
    }
    let lower = h.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while h.len() >= lower && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0 {
            h.pop();
        }
        h.push(p);
    }
    h.pop();
    h
}

/// Closed convex region given by its ccw vertices (1 or 2 vertices for a
/// point or a segment).
struct Region {
    v: Vec<Pt>,
}

impl Region {
    fn contains(&self, p: Pt) -> bool {
        match self.v.len() {
            0 => false,
            1 => self.v[0] == p,
            2 => {
                let (a, b) = (self.v[0], self.v[1]);
                cross(a, b, p) == 0
                    && p.0 >= a.0.min(b.0)
                    && p.0 <= a.0.max(b.0)
                    && p.1 >= a.1.min(b.1)
                    && p.1 <= a.1.max(b.1)
            }
            n => (0..n).all(|i| cross(self.v[i], self.v[(i + 1) % n], p) >= 0),
        }
    }

    /// True when no point of the box [lo, hi] (inclusive) is in the region.
    fn misses_box(&self, lo: Pt, hi: Pt) -> bool {
        let (mut minx, mut miny, mut maxx, mut maxy) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for &(x, y) in &self.v {
            minx = minx.min(x);
            miny = miny.min(y);
            maxx = maxx.max(x);
            maxy = maxy.max(y);
        }
        if maxx < lo.0 || minx > hi.0 || maxy < lo.1 || miny > hi.1 {
            return true;
        }
        let n = self.v.len();
        if n < 2 {
            return false;
        }
        let corners = [lo, (hi.0, lo.1), hi, (lo.0, hi.1)];
        let edges = if n == 2 { 2 } else { n };
        (0..edges).any(|i| {
            let (a, b) = (self.v[i], self.v[(i + 1) % n]);
            corners.iter().all(|&c| cross(a, b, c) < 0)
        })
    }
}

struct Hull<'a> {
    store: &'a mut Store,
    space: &'a SpaceSpec,
    depth: u32,
    shift: u32,
}

impl Hull<'_> {
    /// Doubled center coordinates of the corner cells of a block.
    fn centers(&self, b: &Block) -> (Pt, Pt) {
        let lo = |a: usize| 2 * i64::from(b.lo[a] >> self.shift) + 1;
        let hi = |a: usize| 2 * (i64::from(b.hi(self.space, a) >> self.shift) - 1) + 1;
        ((lo(0), lo(1)), (hi(0), hi(1)))
    }

    fn run(&mut self, n: NodeRef, b: &Block) -> (NodeRef, Vec<Pt>) {
        if self.store.is_white(n) {
            return (NodeRef::WHITE, Vec::new());
        }
        if self.store.is_terminal(n) || b.level == self.depth {
            let (lo, hi) = self.centers(b);
            return (NodeRef::BLACK, convex_polygon(vec![lo, (hi.0, lo.1), hi, (lo.0, hi.1)]));
        }
        let (l, r) = self.store.split(n);
        let (bl, br) = b.children(self.space);
        let (hl, vl) = self.run(l, &bl);
        let (hr, vr) = self.run(r, &br);
        let joined = self.store.join(hl, hr);
        if vl.is_empty() || vr.is_empty() {
            return (joined, if vl.is_empty() { vr } else { vl });
        }
        let axis = self.space.axis(b.level);
        let cut = 2 * i64::from(br.lo[axis] >> self.shift);
        let side = |p: &Pt| if axis == 0 { p.0 < cut } else { p.1 < cut };
        let all: Vec<Pt> = vl.iter().chain(&vr).copied().collect();
        let hull = convex_polygon(all);
        let m = hull.len();
        let mut bridge = Vec::new();
        for i in 0..m {
            let (a, c) = (hull[i], hull[(i + 1) % m]);
            if m > 1 && side(&a) != side(&c) {
                bridge.push(a);
                bridge.push(c);
            }
        }
        let q = Region { v: convex_polygon(bridge) };
        let filled = self.paint(joined, b, &q);
        (filled, hull)
    }

    /// Blackens every cell of block `b` whose center lies in `q`.
    fn paint(&mut self, n: NodeRef, b: &Block, q: &Region) -> NodeRef {
        if n == NodeRef::BLACK {
            return n;
        }
        let (lo, hi) = self.centers(b);
        if q.misses_box(lo, hi) {
            return n;
        }
        if [lo, (hi.0, lo.1), hi, (lo.0, hi.1)].iter().all(|&c| q.contains(c)) {
            return NodeRef::BLACK;
        }
        if b.level == self.depth {
            return if q.contains(lo) { NodeRef::BLACK } else { n };
        }
        let (l, r) = self.store.split(n);
        let (bl, br) = b.children(self.space);
        let pl = self.paint(l, &bl, q);
        let pr = self.paint(r, &br, q);
        self.store.join(pl, pr)
    }
}

/// Smallest digitally convex set containing `tree` at `precision`: every cell
/// whose center lies in the convex hull of the centers of the set's cells.
///
/// Supported for k = 1 and k = 2.
pub fn convex_hull(store: &mut Store, tree: NodeRef, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    let depth = space.depth_at(precision)?;
    let t = assert_at(store, tree, space, precision)?;
    let t = store.support(t);
    match space.k() {
        1 => Ok(interval_hull(store, t, space, depth)),
        2 => {
            let mut h = Hull { store, space, depth, shift: space.r() - precision };
            Ok(h.run(t, &Block::root()).0)
        }
        _ => Err(Error::Unsupported("convex hull is implemented for k <= 2")),
    }
}

fn interval_hull(store: &mut Store, t: NodeRef, space: &SpaceSpec, depth: u32) -> NodeRef {
    let mut lo = u64::MAX;
    let mut hi = 0;
    crate::tree::for_each_leaf(store, t, space, depth, |n, b| {
        if !store.is_white(n) {
            let (a, z) = b.code_range(depth);
            lo = lo.min(a);
            hi = hi.max(z);
        }
    });
    if lo == u64::MAX {
        return NodeRef::WHITE;
    }
    span(store, 0, depth, 0, lo, hi)
}

fn span(store: &mut Store, level: u32, depth: u32, code: u64, lo: u64, hi: u64) -> NodeRef {
    let shift = depth - level;
    let (a, z) = (code << shift, (code + 1) << shift);
    if z <= lo || a >= hi {
        return NodeRef::WHITE;
    }
    if a >= lo && z <= hi {
        return NodeRef::BLACK;
    }
    let l = span(store, level + 1, depth, code << 1, lo, hi);
    let r = span(store, level + 1, depth, (code << 1) | 1, lo, hi);
    store.join(l, r)
}
