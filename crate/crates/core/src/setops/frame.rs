//! Inductive limit: trees whose reference hypercube grows to fit new data.
//!
//! A frame is a half-open cube `[min, min + d)^k` whose side `d` is a power of
//! two and whose corner is normally a multiple of `d`. Frames nest like dyadic cells,
//! so growing a frame re-roots the old tree as a sub-block of the new one.
//! All frame arithmetic is exact on dyadic rationals.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{combine, BoolOp};
use crate::error::{Error, Result};
use crate::tree::build::{cut, insert_leaf};
use crate::tree::{cell_code, NodeRef, SpaceSpec, Store, MAX_DIM};

/// Exact binary rational `m * 2^e`.
#[derive(Clone, Copy, Debug)]
pub struct Dyadic {
    m: i128,
    e: i32,
}

impl std::ops::Add for Dyadic {
    type Output = Dyadic;
    fn add(self, o: Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::align(self, o);
        Dyadic::new(a + b, e)
    }
}

impl std::ops::Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, o: Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::align(self, o);
        Dyadic::new(a - b, e)
    }
}

impl Dyadic {
    pub fn new(m: i128, e: i32) -> Self {
        let mut d = Dyadic { m, e };
        d.reduce();
        d
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(i128::from(v), 0)
    }

    /// Exact conversion; fails on non-finite input.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::CoordOutOfRange { axis: 0, value: v });
        }
        if v == 0.0 {
            return Ok(Dyadic::new(0, 0));
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i128 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i128 << 52), exp - 1075) };
        Ok(Dyadic::new(sign * m, e))
    }

    pub fn pow2(j: i32) -> Self {
        Dyadic { m: 1, e: j }
    }

    fn reduce(&mut self) {
        if self.m == 0 {
            self.e = 0;
            return;
        }
        let tz = self.m.trailing_zeros() as i32;
        self.m >>= tz;
        self.e += tz;
    }

    fn align(a: Dyadic, b: Dyadic) -> (i128, i128, i32) {
        let e = a.e.min(b.e);
        let sa = (a.e - e) as u32;
        let sb = (b.e - e) as u32;
        (a.m.checked_shl(sa).expect("dyadic overflow"), b.m.checked_shl(sb).expect("dyadic overflow"), e)
    }

    pub fn mul_pow2(self, j: i32) -> Dyadic {
        Dyadic::new(self.m, self.e + j)
    }

    /// `floor(self / 2^j)` as an integer.
    pub fn floor_div_pow2(self, j: i32) -> i128 {
        let e = self.e - j;
        if e >= 0 {
            self.m << e
        } else if -e >= 127 {
            if self.m < 0 {
                -1
            } else {
                0
            }
        } else {
            self.m >> (-e)
        }
    }

    /// `ceil(self / 2^j)` as an integer.
    pub fn ceil_div_pow2(self, j: i32) -> i128 {
        -Dyadic { m: -self.m, e: self.e }.floor_div_pow2(j)
    }

    /// Smallest `j` with `2^j >= self`; `self` must be positive.
    pub fn log2_ceil(self) -> i32 {
        debug_assert!(self.m > 0);
        if self.m == 1 {
            self.e
        } else {
            self.e + (128 - self.m.leading_zeros()) as i32
        }
    }

    pub fn is_zero(self) -> bool {
        self.m == 0
    }

    pub fn to_f64(self) -> f64 {
        self.m as f64 * 2f64.powi(self.e)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && self.e == o.e
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        (*self - *o).m.cmp(&0)
    }
}

/// Reference hypercube of a tree built by inductive limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveFrame {
    min: Vec<Dyadic>,
    /// Exponent of the side `2^j`; `None` for the degenerate frame of a point.
    side_log2: Option<i32>,
}

impl InductiveFrame {
    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Lower faces.
    pub fn minspc(&self) -> Vec<f64> {
        self.min.iter().map(|d| d.to_f64()).collect()
    }

    /// Upper faces (exclusive).
    pub fn maxspc(&self) -> Vec<f64> {
        let side = self.side();
        self.min.iter().map(|d| (*d + side).to_f64()).collect()
    }

    /// Side length; zero for a degenerate frame.
    pub fn side(&self) -> Dyadic {
        match self.side_log2 {
            Some(j) => Dyadic::pow2(j),
            None => Dyadic::new(0, 0),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.side_log2.is_none()
    }

    fn contains(&self, v: &[Dyadic]) -> bool {
        match self.side_log2 {
            None => self.min == v,
            Some(j) => self.min.iter().zip(v).all(|(m, x)| x >= m && *x < *m + Dyadic::pow2(j)),
        }
    }
}

enum Content<'a> {
    Point(&'a [Dyadic]),
    Frame(&'a [Dyadic], i32),
}

fn bounds(c: &Content<'_>, a: usize) -> (Dyadic, Dyadic) {
    match c {
        Content::Point(p) => (p[a], p[a]),
        Content::Frame(m, j) => (m[a], m[a] + Dyadic::pow2(*j)),
    }
}

/// Smallest frame holding all contents.
///
/// Frames are aligned on the absolute dyadic grid (corner a multiple of the
/// side), which makes the result independent of insertion order. No such
/// cube contains both negative and non-negative coordinates on one axis; in
/// that case the frame grows around the largest existing frame instead.
/// Returns `None` when the contents reduce to a single point.
fn new_limits(contents: &[Content<'_>], k: usize) -> Result<Option<(Vec<Dyadic>, i32)>> {
    let seed = contents
        .iter()
        .filter_map(|c| match c {
            Content::Frame(_, j) => Some(*j),
            Content::Point(_) => None,
        })
        .max();
    let mut extent = Dyadic::new(0, 0);
    for a in 0..k {
        let lo = contents.iter().map(|c| bounds(c, a).0).min().expect("at least one content");
        let hi = contents.iter().map(|c| bounds(c, a).1).max().expect("at least one content");
        extent = extent.max(hi - lo);
    }
    let mut j = match seed {
        Some(j) => j,
        None if extent.is_zero() => return Ok(None),
        None => extent.log2_ceil(),
    };
    loop {
        let mut min = Vec::with_capacity(k);
        let mut widest = 0i128;
        for a in 0..k {
            let mut lo = i128::MAX;
            let mut hi = i128::MIN;
            for c in contents {
                let (l, h) = match c {
                    Content::Point(p) => (p[a].floor_div_pow2(j), p[a].floor_div_pow2(j) + 1),
                    Content::Frame(m, fj) => (m[a].floor_div_pow2(j), (m[a] + Dyadic::pow2(*fj)).ceil_div_pow2(j)),
                };
                lo = lo.min(l);
                hi = hi.max(h);
            }
            if lo < 0 && hi > 0 {
                return anchored_limits(contents, k).map(Some);
            }
            min.push(Dyadic::new(lo, j));
            widest = widest.max(hi - lo);
        }
        if widest == 1 {
            return Ok(Some((min, j)));
        }
        j = Dyadic::new(widest, j).log2_ceil();
    }
}

/// Growth around an anchor frame: the new frame keeps the anchor as one of
/// its dyadic sub-blocks and extends toward the other contents.
fn anchored_limits(contents: &[Content<'_>], k: usize) -> Result<(Vec<Dyadic>, i32)> {
    let anchor = contents
        .iter()
        .filter_map(|c| match c {
            Content::Frame(m, j) => Some((m.to_vec(), *j)),
            Content::Point(_) => None,
        })
        .fold(None, |best: Option<(Vec<Dyadic>, i32)>, f| match best {
            Some(b) if b.1 >= f.1 => Some(b),
            _ => Some(f),
        });
    let (origin, ju) = match anchor {
        Some(f) => f,
        None => {
            let Content::Point(p) = contents[0] else { unreachable!("no frame among contents") };
            let mut extent = Dyadic::new(0, 0);
            for a in 0..k {
                let lo = contents.iter().map(|c| bounds(c, a).0).min().expect("contents");
                let hi = contents.iter().map(|c| bounds(c, a).1).max().expect("contents");
                extent = extent.max(hi - lo);
            }
            (p.to_vec(), extent.log2_ceil())
        }
    };
    let mut units = 1i128;
    let mut below = vec![0i128; k];
    for a in 0..k {
        let mut lo = 0i128;
        let mut hi = 1i128;
        for c in contents {
            let (l, h) = match c {
                Content::Point(p) => {
                    let u = (p[a] - origin[a]).floor_div_pow2(ju);
                    (u, u + 1)
                }
                Content::Frame(m, fj) => {
                    let off = m[a] - origin[a];
                    if off.floor_div_pow2(*fj) != off.ceil_div_pow2(*fj) {
                        return Err(Error::Unsupported("frames are not aligned on a common grid"));
                    }
                    (off.floor_div_pow2(ju), (off + Dyadic::pow2(*fj)).ceil_div_pow2(ju))
                }
            };
            lo = lo.min(l);
            hi = hi.max(h);
        }
        below[a] = -lo;
        units = units.max(hi - lo);
    }
    let j = ju + Dyadic::new(units, 0).log2_ceil();
    let min = (0..k).map(|a| origin[a] - Dyadic::new(below[a], ju)).collect();
    Ok((min, j))
}

fn to_dyadic(v: &[f64]) -> Result<Vec<Dyadic>> {
    v.iter().map(|&x| Dyadic::from_f64(x)).collect()
}

/// Start a tree holding one point: black root in a degenerate frame.
pub fn il_create(vector: &[f64]) -> Result<(NodeRef, InductiveFrame)> {
    if vector.is_empty() || vector.len() > MAX_DIM {
        return Err(Error::DimensionMismatch { expected: 1, found: vector.len() });
    }
    Ok((NodeRef::BLACK, InductiveFrame { min: to_dyadic(vector)?, side_log2: None }))
}

/// Cell of `v` inside a non-degenerate frame at precision `r`.
fn cell_in_frame(frame: &InductiveFrame, v: &[Dyadic], space: &SpaceSpec) -> Vec<u32> {
    let j = frame.side_log2.expect("non-degenerate frame");
    let r = space.r() as i32;
    frame.min.iter().zip(v).map(|(m, x)| (*x - *m).floor_div_pow2(j - r) as u32).collect()
}

/// Express a tree of `old` inside the larger frame `new` at precision `r`.
fn reroot(store: &mut Store, tree: NodeRef, old: &InductiveFrame, new: &InductiveFrame, space: &SpaceSpec) -> NodeRef {
    let Some(jo) = old.side_log2 else {
        if tree == NodeRef::WHITE {
            return tree;
        }
        let cell = cell_in_frame(new, &old.min, space);
        let code = cell_code(space, space.r(), &cell);
        let leaf = store.hull(tree);
        return insert_leaf(store, NodeRef::WHITE, space.depth(), 0, code, leaf);
    };
    let jn = new.side_log2.expect("new frame contains an old one");
    let steps = (jn - jo) as u32;
    if steps == 0 {
        return tree;
    }
    let k = space.dim();
    let offsets: Vec<i128> = (0..k).map(|a| (old.min[a] - new.min[a]).floor_div_pow2(jo)).collect();
    let mut n = tree;
    for level in (0..steps * space.k()).rev() {
        let axis = level as usize % k;
        let bit = (offsets[axis] >> (steps - 1 - level / space.k())) & 1;
        n = if bit == 1 { store.internal(NodeRef::WHITE, n) } else { store.internal(n, NodeRef::WHITE) };
    }
    let n = cut(store, n, space.depth(), &mut HashMap::new());
    store.normalize(n)
}

fn check_dim(frame: &InductiveFrame, space: &SpaceSpec, len: usize) -> Result<()> {
    if frame.dim() != space.dim() || len != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: len });
    }
    Ok(())
}

/// Add a point, growing the frame first when the point lies outside it.
pub fn il_add(
    store: &mut Store,
    tree: NodeRef,
    frame: &InductiveFrame,
    vector: &[f64],
    space: &SpaceSpec,
) -> Result<(NodeRef, InductiveFrame)> {
    check_dim(frame, space, vector.len())?;
    let v = to_dyadic(vector)?;
    if frame.contains(&v) {
        if frame.is_degenerate() {
            return Ok((NodeRef::BLACK, frame.clone()));
        }
        let cell = cell_in_frame(frame, &v, space);
        let code = cell_code(space, space.r(), &cell);
        return Ok((insert_leaf(store, tree, space.depth(), 0, code, NodeRef::BLACK), frame.clone()));
    }
    let old = match frame.side_log2 {
        Some(j) => Content::Frame(&frame.min, j),
        None => Content::Point(&frame.min),
    };
    let (min, j) = new_limits(&[old, Content::Point(&v)], space.dim())?.expect("distinct points span a frame");
    let new = InductiveFrame { min, side_log2: Some(j) };
    let moved = reroot(store, tree, frame, &new, space);
    let cell = cell_in_frame(&new, &v, space);
    let code = cell_code(space, space.r(), &cell);
    Ok((insert_leaf(store, moved, space.depth(), 0, code, NodeRef::BLACK), new))
}

/// Boolean operation on two trees living in different frames.
#[allow(clippy::too_many_arguments)]
pub fn il_boolean(
    store: &mut Store,
    op: BoolOp,
    t1: NodeRef,
    f1: &InductiveFrame,
    t2: NodeRef,
    f2: &InductiveFrame,
    space: &SpaceSpec,
    precision: u32,
) -> Result<(NodeRef, InductiveFrame)> {
    if op.arity() != 2 {
        return Err(Error::ArityMismatch { op: op.name(), expected: 2 });
    }
    check_dim(f1, space, f2.dim())?;
    let depth = space.depth_at(precision)?;
    let content = |f: &InductiveFrame| -> Vec<Dyadic> { f.min.clone() };
    let (m1, m2) = (content(f1), content(f2));
    let c1 = match f1.side_log2 {
        Some(j) => Content::Frame(&m1, j),
        None => Content::Point(&m1),
    };
    let c2 = match f2.side_log2 {
        Some(j) => Content::Frame(&m2, j),
        None => Content::Point(&m2),
    };
    let new = match new_limits(&[c1, c2], space.dim())? {
        Some((min, j)) => InductiveFrame { min, side_log2: Some(j) },
        None => f1.clone(),
    };
    let (a, b) = if new == *f1 && new == *f2 {
        (t1, t2)
    } else {
        (reroot(store, t1, f1, &new, space), reroot(store, t2, f2, &new, space))
    };
    if new.is_degenerate() {
        let (ha, hb) = (store.hull(a), store.hull(b));
        return Ok((super::leaf_op(store, op, ha, hb), new));
    }
    Ok((combine(store, op, a, b, depth, &mut HashMap::new()), new))
}
