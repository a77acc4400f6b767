//! Transformations of trees: homography, symmetry, translation, hidden part
//! removal and projection.

use std::collections::HashMap;

use super::matrix::{dehomogenize, Transform};
use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::integral::Cylinder;
use crate::setops::{diff_at, union_at};
use crate::tree::{assert_at, for_each_leaf, Block, NodeRef, SpaceSpec, Store};

const TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Cover {
    /// The probe does not meet the block.
    Miss,
    White,
    Black,
    Mixed,
}

impl Cover {
    fn join(self, other: Cover) -> Cover {
        use Cover::*;
        match (self, other) {
            (Miss, x) | (x, Miss) => x,
            (White, White) => White,
            (Black, Black) => Black,
            _ => Mixed,
        }
    }
}

struct Homography<'a> {
    store: &'a mut Store,
    input: NodeRef,
    /// The valued input, when the tree is a pyramid.
    values: Option<NodeRef>,
    space: &'a SpaceSpec,
    depth_in: u32,
    depth_out: u32,
}

impl Homography<'_> {
    /// How the box [lo, hi] sits against the black region of the input.
    fn cover(&self, n: NodeRef, b: &Block, lo: &[f64], hi: &[f64]) -> Cover {
        let k = self.space.dim();
        let (blo, bhi) = b.unit_bounds(self.space);
        if (0..k).any(|a| hi[a] <= blo[a] + TOL || lo[a] >= bhi[a] - TOL) {
            return Cover::Miss;
        }
        if self.store.is_white(n) {
            return Cover::White;
        }
        if self.store.is_terminal(n) || b.level == self.depth_in {
            return Cover::Black;
        }
        let (l, r) = self.store.split(n);
        let (bl, br) = b.children(self.space);
        let c = self.cover(l, &bl, lo, hi);
        if c == Cover::Mixed {
            return c;
        }
        c.join(self.cover(r, &br, lo, hi))
    }

    /// Largest value of the input cells meeting the box [lo, hi].
    fn max_value(&self, n: NodeRef, b: &Block, lo: &[f64], hi: &[f64], best: &mut f64) {
        let k = self.space.dim();
        let (blo, bhi) = b.unit_bounds(self.space);
        if (0..k).any(|a| hi[a] <= blo[a] + TOL || lo[a] >= bhi[a] - TOL) {
            return;
        }
        match self.store.value(n) {
            Some(v) if v > *best => {}
            _ => return,
        }
        match self.store.children(n) {
            Some((l, r)) if b.level < self.depth_in => {
                let (bl, br) = b.children(self.space);
                self.max_value(l, &bl, lo, hi, best);
                self.max_value(r, &br, lo, hi, best);
            }
            _ => *best = self.store.value(n).unwrap_or(*best),
        }
    }

    fn classify(&self, verts: &[Vec<f64>]) -> Result<(Cover, Vec<f64>, Vec<f64>)> {
        let k = self.space.dim();
        let sign = verts[0][k].signum();
        let mut lo = vec![f64::INFINITY; k];
        let mut hi = vec![f64::NEG_INFINITY; k];
        for v in verts {
            if v[k].signum() != sign {
                return Err(Error::HomogeneousDivideByZero);
            }
            let p = dehomogenize(v)?;
            for a in 0..k {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let outside = (0..k).any(|a| lo[a] < -TOL || hi[a] > 1.0 + TOL);
        let c = self.cover(self.input, &Block::root(), &lo, &hi);
        Ok((if outside { c.join(Cover::White) } else { c }, lo, hi))
    }

    fn black(&mut self, lo: &[f64], hi: &[f64]) -> NodeRef {
        let Some(values) = self.values else { return NodeRef::BLACK };
        let mut best = f64::NEG_INFINITY;
        self.max_value(values, &Block::root(), lo, hi, &mut best);
        if best.is_finite() {
            self.store.valued(best)
        } else {
            NodeRef::BLACK
        }
    }

    fn run(&mut self, verts: Vec<Vec<f64>>, b: &Block) -> Result<NodeRef> {
        match self.classify(&verts)? {
            (Cover::Miss | Cover::White, _, _) => return Ok(NodeRef::WHITE),
            (Cover::Black, lo, hi) => return Ok(self.black(&lo, &hi)),
            (Cover::Mixed, lo, hi) if b.level == self.depth_out => return Ok(self.black(&lo, &hi)),
            (Cover::Mixed, _, _) => {}
        }
        let axis = self.space.axis(b.level);
        let half = |upper: bool| -> Vec<Vec<f64>> {
            (0..verts.len())
                .map(|i| {
                    let bit = (i >> axis) & 1 == 1;
                    if bit != upper {
                        let j = i ^ (1 << axis);
                        verts[i].iter().zip(&verts[j]).map(|(x, y)| (x + y) / 2.0).collect()
                    } else {
                        verts[i].clone()
                    }
                })
                .collect()
        };
        let (vl, vr) = (half(false), half(true));
        let (bl, br) = b.children(self.space);
        let l = self.run(vl, &bl)?;
        let r = self.run(vr, &br)?;
        Ok(self.store.join(l, r))
    }
}

/// Image of a tree under the homography whose inverse maps the unit
/// hypercube onto `inverse_images`.
///
/// The output space is subdivided; each output block's inverse image is
/// obtained by halving the homogeneous vertices and is compared with the
/// input tree. Blocks still ambiguous at `precision_out` are included.
/// A pyramid keeps its values: each black output block takes the largest
/// value among the input cells its inverse image meets.
pub fn tree_homographic(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    inverse_images: &Polytope,
    precision_in: u32,
    precision_out: u32,
) -> Result<NodeRef> {
    if inverse_images.k != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: inverse_images.k });
    }
    let depth_in = space.depth_at(precision_in)?;
    let depth_out = space.depth_at(precision_out)?;
    let t = assert_at(store, tree, space, precision_in)?;
    let input = store.support(t);
    let values = store.is_valued(t).then_some(t);
    let mut h = Homography { store, input, values, space, depth_in, depth_out };
    h.run(inverse_images.vertices.clone(), &Block::root())
}

/// Applies a transform given with its inverse.
pub fn transform_tree(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    t: &Transform,
    precision_in: u32,
    precision_out: u32,
) -> Result<NodeRef> {
    let inv = Polytope::unit_hypercube(space.dim()).transform(&t.inverse, &t.direct)?;
    tree_homographic(store, tree, space, &inv, precision_in, precision_out)
}

/// Mirror image across the middle hyperplane orthogonal to `axis` (0-based).
pub fn tree_symmetry(store: &mut Store, tree: NodeRef, space: &SpaceSpec, axis: usize) -> Result<NodeRef> {
    if axis >= space.dim() {
        return Err(Error::AxisOutOfRange { axis, k: space.k() });
    }
    fn rec(
        store: &mut Store,
        n: NodeRef,
        level: u32,
        space: &SpaceSpec,
        axis: usize,
        memo: &mut HashMap<(NodeRef, u32), NodeRef>,
    ) -> NodeRef {
        if store.is_terminal(n) {
            return n;
        }
        if let Some(&m) = memo.get(&(n, level)) {
            return m;
        }
        let (l, r) = store.split(n);
        let ml = rec(store, l, level + 1, space, axis, memo);
        let mr = rec(store, r, level + 1, space, axis, memo);
        let m = if space.axis(level) == axis { store.join(mr, ml) } else { store.join(ml, mr) };
        memo.insert((n, level), m);
        m
    }
    Ok(rec(store, tree, 0, space, axis, &mut HashMap::new()))
}

/// Shift by `vector` (frame units), quantized to whole cells at
/// `precision_out`. Whatever leaves the frame is clipped.
pub fn tree_translate(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    vector: &[f64],
    precision_in: u32,
    precision_out: u32,
) -> Result<NodeRef> {
    let k = space.dim();
    if vector.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: vector.len() });
    }
    let depth_in = space.depth_at(precision_in)?;
    let depth_out = space.depth_at(precision_out)?;
    let cells = 1i64 << precision_out;
    let shift: Vec<i64> = vector.iter().map(|v| (v * cells as f64).round() as i64).collect();
    let t = assert_at(store, tree, space, precision_in)?;
    let unit = space.r() - precision_out;
    let mut boxes = Vec::new();
    for_each_leaf(store, t, space, depth_in, |n, b| {
        if store.is_white(n) {
            return;
        }
        let mut lo = vec![0i64; k];
        let mut hi = vec![0i64; k];
        for a in 0..k {
            let l = i64::from(b.lo[a] >> unit);
            let h = (i64::from(b.hi(space, a)) + (1 << unit) - 1) >> unit;
            lo[a] = (l + shift[a]).clamp(0, cells);
            hi[a] = (h + shift[a]).clamp(0, cells);
        }
        if (0..k).all(|a| lo[a] < hi[a]) {
            boxes.push((lo, hi, n));
        }
    });
    let mut out = NodeRef::WHITE;
    for (lo, hi, leaf) in boxes {
        out = paint_box(store, out, space, depth_out, unit, &Block::root(), &lo, &hi, leaf);
    }
    Ok(out)
}

/// Sets every cell of the box [lo, hi) (cells of `2^unit` precision-r cells)
/// to `leaf`.
#[allow(clippy::too_many_arguments)]
fn paint_box(
    store: &mut Store,
    n: NodeRef,
    space: &SpaceSpec,
    depth: u32,
    unit: u32,
    b: &Block,
    lo: &[i64],
    hi: &[i64],
    leaf: NodeRef,
) -> NodeRef {
    let k = space.dim();
    let mut inside = true;
    for a in 0..k {
        let bl = i64::from(b.lo[a] >> unit);
        let bh = i64::from(b.hi(space, a) >> unit).max(bl + 1);
        if bh <= lo[a] || bl >= hi[a] {
            return n;
        }
        inside &= bl >= lo[a] && bh <= hi[a];
    }
    if inside || b.level == depth {
        return leaf;
    }
    let (l, r) = store.split(n);
    let (bl, br) = b.children(space);
    let pl = paint_box(store, l, space, depth, unit, &bl, lo, hi, leaf);
    let pr = paint_box(store, r, space, depth, unit, &br, lo, hi, leaf);
    store.join(pl, pr)
}

/// Viewing sense for hidden part removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViewSense {
    /// The observer looks toward increasing coordinates.
    Increasing,
    Decreasing,
}

/// Keeps, on every line parallel to `axis`, only the first black cell met in
/// the viewing sense.
pub fn hidden_part_removal(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    axis: usize,
    sense: ViewSense,
) -> Result<NodeRef> {
    if axis >= space.dim() {
        return Err(Error::AxisOutOfRange { axis, k: space.k() });
    }
    struct Hpr<'a> {
        space: &'a SpaceSpec,
        axis: usize,
        sense: ViewSense,
        cyl: Cylinder,
        memo: HashMap<(NodeRef, u32), NodeRef>,
    }
    impl Hpr<'_> {
        fn run(&mut self, store: &mut Store, n: NodeRef, level: u32) -> NodeRef {
            if store.is_white(n) || level == self.space.depth() {
                return n;
            }
            if let Some(&m) = self.memo.get(&(n, level)) {
                return m;
            }
            let (l, r) = store.split(n);
            let hl = self.run(store, l, level + 1);
            let hr = self.run(store, r, level + 1);
            let m = if self.space.axis(level) == self.axis {
                let remaining = self.space.depth() - level - 1;
                match self.sense {
                    ViewSense::Increasing => {
                        let c = self.cyl.of(store, self.space, l, level + 1);
                        let hr = diff_at(store, hr, c, remaining);
                        store.join(hl, hr)
                    }
                    ViewSense::Decreasing => {
                        let c = self.cyl.of(store, self.space, r, level + 1);
                        let hl = diff_at(store, hl, c, remaining);
                        store.join(hl, hr)
                    }
                }
            } else {
                store.join(hl, hr)
            };
            self.memo.insert((n, level), m);
            m
        }
    }
    let mut h = Hpr { space, axis, sense, cyl: Cylinder::new(axis), memo: HashMap::new() };
    Ok(h.run(store, tree, 0))
}

/// Shadow of the tree along `axis`: the union of all its slices, in the
/// (k-1)-space of the remaining axes.
pub fn project(store: &mut Store, tree: NodeRef, space: &SpaceSpec, axis: usize) -> Result<(NodeRef, SpaceSpec)> {
    if space.k() < 2 {
        return Err(Error::Unsupported("projection needs k >= 2"));
    }
    if axis >= space.dim() {
        return Err(Error::AxisOutOfRange { axis, k: space.k() });
    }
    let out = space.with_k(space.k() - 1)?;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        store: &mut Store,
        n: NodeRef,
        level: u32,
        out_level: u32,
        space: &SpaceSpec,
        out: &SpaceSpec,
        axis: usize,
        memo: &mut HashMap<(NodeRef, u32), NodeRef>,
    ) -> NodeRef {
        if store.is_terminal(n) {
            return if store.is_white(n) { n } else { NodeRef::BLACK };
        }
        if let Some(&m) = memo.get(&(n, level)) {
            return m;
        }
        let (l, r) = store.split(n);
        let m = if space.axis(level) == axis {
            let pl = rec(store, l, level + 1, out_level, space, out, axis, memo);
            let pr = rec(store, r, level + 1, out_level, space, out, axis, memo);
            union_at(store, pl, pr, out.depth() - out_level)
        } else {
            let pl = rec(store, l, level + 1, out_level + 1, space, out, axis, memo);
            let pr = rec(store, r, level + 1, out_level + 1, space, out, axis, memo);
            store.join(pl, pr)
        };
        memo.insert((n, level), m);
        m
    }
    let t = rec(store, tree, 0, 0, space, &out, axis, &mut HashMap::new());
    Ok((t, out))
}
