//! Segment probes and primitive shapes.

use crate::error::{Error, Result};
use crate::setops::union;
use crate::tree::{Block, NodeRef, SpaceSpec, Store};

use super::polytope::corners;

/// `origin + t * (end - origin)` for t in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub origin: Vec<f64>,
    pub end: Vec<f64>,
}

impl Segment {
    pub fn new(origin: &[f64], end: &[f64]) -> Self {
        Segment { origin: origin.to_vec(), end: end.to_vec() }
    }

    /// Parameter interval of the segment inside the closed box, by slab
    /// clipping against each pair of face planes.
    pub fn clip(&self, lo: &[f64], hi: &[f64]) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for a in 0..lo.len() {
            let o = self.origin[a];
            let d = self.end[a] - o;
            if d == 0.0 {
                if o < lo[a] || o > hi[a] {
                    return None;
                }
                continue;
            }
            let (mut ta, mut tb) = ((lo[a] - o) / d, (hi[a] - o) / d);
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }
}

fn check_point(space: &SpaceSpec, p: &[f64]) -> Result<()> {
    if p.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: p.len() });
    }
    Ok(())
}

/// True when some non-white block of `tree` at `precision` meets the closed
/// segment.
pub fn segment_intersects(
    store: &Store,
    tree: NodeRef,
    space: &SpaceSpec,
    seg: &Segment,
    precision: u32,
) -> Result<bool> {
    check_point(space, &seg.origin)?;
    check_point(space, &seg.end)?;
    let depth = space.depth_at(precision)?;
    Ok(seg_rec(store, tree, space, seg, depth, &Block::root()))
}

fn seg_rec(store: &Store, n: NodeRef, space: &SpaceSpec, seg: &Segment, depth: u32, b: &Block) -> bool {
    if store.is_white(n) {
        return false;
    }
    let (lo, hi) = b.unit_bounds(space);
    let k = space.dim();
    if seg.clip(&lo[..k], &hi[..k]).is_none() {
        return false;
    }
    if store.is_terminal(n) || b.level == depth {
        return true;
    }
    let (l, r) = store.split(n);
    let (bl, br) = b.children(space);
    seg_rec(store, l, space, seg, depth, &bl) || seg_rec(store, r, space, seg, depth, &br)
}

/// Primitive shapes, in frame coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Segment(Vec<f64>, Vec<f64>),
    BrokenLine(Vec<Vec<f64>>),
    /// Closed polygon. Filled when k = 2, outline otherwise.
    Polygon(Vec<Vec<f64>>),
    Sphere {
        center: Vec<f64>,
        radius: f64,
    },
    /// Points within `range` of `apex` whose direction is within the
    /// half-aperture `angle` (radians) of `axis`.
    Cone {
        apex: Vec<f64>,
        axis: Vec<f64>,
        angle: f64,
        range: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Out,
    In,
    Cross,
}

/// Digitizes a shape at `precision`. Blocks still ambiguous at that depth are
/// included.
pub fn shape_tree(store: &mut Store, shape: &Shape, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    let depth = space.depth_at(precision)?;
    let k = space.dim();
    match shape {
        Shape::Segment(a, b) => {
            check_point(space, a)?;
            check_point(space, b)?;
            let seg = Segment::new(a, b);
            Ok(classify_rec(store, space, depth, &Block::root(), &|lo, hi| {
                if seg.clip(lo, hi).is_some() {
                    Side::Cross
                } else {
                    Side::Out
                }
            }))
        }
        Shape::BrokenLine(pts) => {
            if pts.is_empty() {
                return Err(Error::DegenerateShape("broken line without points"));
            }
            let mut acc = NodeRef::WHITE;
            for w in pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).chain(single(pts)) {
                let t = shape_tree(store, &Shape::Segment(w.0, w.1), space, precision)?;
                acc = union(store, acc, t, space);
            }
            Ok(acc)
        }
        Shape::Polygon(pts) => {
            if pts.len() < 3 {
                return Err(Error::DegenerateShape("polygon needs at least 3 points"));
            }
            for p in pts {
                check_point(space, p)?;
            }
            let mut ring = pts.clone();
            ring.push(pts[0].clone());
            let outline = shape_tree(store, &Shape::BrokenLine(ring), space, precision)?;
            if k != 2 {
                return Ok(outline);
            }
            let poly: Vec<(f64, f64)> = pts.iter().map(|p| (p[0], p[1])).collect();
            let fill = classify_rec(store, space, depth, &Block::root(), &|lo, hi| {
                let cs = [(lo[0], lo[1]), (hi[0], lo[1]), (lo[0], hi[1]), (hi[0], hi[1])];
                let crossing = poly
                    .iter()
                    .zip(poly.iter().cycle().skip(1))
                    .any(|(a, b)| Segment::new(&[a.0, a.1], &[b.0, b.1]).clip(lo, hi).is_some());
                if crossing {
                    Side::Cross
                } else if point_in_polygon(&poly, cs[0]) {
                    Side::In
                } else {
                    Side::Out
                }
            });
            Ok(union(store, fill, outline, space))
        }
        Shape::Sphere { center, radius } => {
            check_point(space, center)?;
            if *radius <= 0.0 || !radius.is_finite() {
                return Err(Error::DegenerateShape("sphere radius must be positive"));
            }
            let r2 = radius * radius;
            Ok(classify_rec(store, space, depth, &Block::root(), &|lo, hi| {
                let (near, far) = box_distances(center, lo, hi);
                if near > r2 {
                    Side::Out
                } else if far <= r2 {
                    Side::In
                } else {
                    Side::Cross
                }
            }))
        }
        Shape::Cone { apex, axis, angle, range } => {
            check_point(space, apex)?;
            check_point(space, axis)?;
            let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
            if *range <= 0.0 || norm == 0.0 || *angle <= 0.0 || *angle > std::f64::consts::FRAC_PI_2 {
                return Err(Error::DegenerateShape("cone needs positive range, nonzero axis, angle in (0, pi/2]"));
            }
            let u: Vec<f64> = axis.iter().map(|x| x / norm).collect();
            let r2 = range * range;
            let in_cone = |x: &[f64]| {
                let d: Vec<f64> = x.iter().zip(apex).map(|(a, b)| a - b).collect();
                let len = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                len == 0.0 || d.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() >= len * angle.cos() - 1e-12
            };
            Ok(classify_rec(store, space, depth, &Block::root(), &|lo, hi| {
                let (near, far) = box_distances(apex, lo, hi);
                if near > r2 {
                    return Side::Out;
                }
                let cs = corners(lo, hi);
                if far <= r2 && cs.iter().all(|c| in_cone(c)) {
                    return Side::In;
                }
                // Bounding-sphere test against the cone's aperture.
                let mid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect();
                let rho = lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt() / 2.0;
                let d: Vec<f64> = mid.iter().zip(apex).map(|(a, b)| a - b).collect();
                let len = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                if len > rho {
                    let cos = (d.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() / len).clamp(-1.0, 1.0);
                    if cos.acos() - (rho / len).asin() > *angle {
                        return Side::Out;
                    }
                }
                Side::Cross
            }))
        }
    }
}

fn single(pts: &[Vec<f64>]) -> Option<(Vec<f64>, Vec<f64>)> {
    (pts.len() == 1).then(|| (pts[0].clone(), pts[0].clone()))
}

/// Squared distances from `c` to the nearest and farthest points of a box.
fn box_distances(c: &[f64], lo: &[f64], hi: &[f64]) -> (f64, f64) {
    let mut near = 0.0;
    let mut far = 0.0;
    for a in 0..c.len() {
        let n = if c[a] < lo[a] {
            lo[a] - c[a]
        } else if c[a] > hi[a] {
            c[a] - hi[a]
        } else {
            0.0
        };
        let f = (c[a] - lo[a]).abs().max((hi[a] - c[a]).abs());
        near += n * n;
        far += f * f;
    }
    (near, far)
}

/// Even-odd rule.
pub(crate) fn point_in_polygon(poly: &[(f64, f64)], p: (f64, f64)) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn classify_rec(
    store: &mut Store,
    space: &SpaceSpec,
    depth: u32,
    b: &Block,
    f: &dyn Fn(&[f64], &[f64]) -> Side,
) -> NodeRef {
    let (lo, hi) = b.unit_bounds(space);
    let k = space.dim();
    match f(&lo[..k], &hi[..k]) {
        Side::Out => NodeRef::WHITE,
        Side::In => NodeRef::BLACK,
        Side::Cross if b.level == depth => NodeRef::BLACK,
        Side::Cross => {
            let (bl, br) = b.children(space);
            let l = classify_rec(store, space, depth, &bl, f);
            let r = classify_rec(store, space, depth, &br, f);
            store.join(l, r)
        }
    }
}
