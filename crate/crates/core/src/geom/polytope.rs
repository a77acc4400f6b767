//! Polytopes as images of the unit hypercube, in both representations.

use super::matrix::{dehomogenize, HomMatrix};
use crate::error::{Error, Result};
use crate::tree::{Block, NodeRef, SpaceSpec, Store};

const TOL: f64 = 1e-12;

/// Vertices are kept homogeneous and unnormalized so that midpoints of
/// vertices are exact images of midpoints under any homography.
///
/// A point x is inside when `[x, 1] . h >= 0` for every lower face and
/// `[x, 1] . h <= 0` for every upper face.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub k: usize,
    pub vertices: Vec<Vec<f64>>,
    pub lower_faces: Vec<Vec<f64>>,
    pub upper_faces: Vec<Vec<f64>>,
}

impl Polytope {
    /// Vertex i has coordinate bit a equal to bit a of i.
    pub fn unit_hypercube(k: usize) -> Self {
        let vertices = (0..1usize << k)
            .map(|i| {
                let mut v: Vec<f64> = (0..k).map(|a| ((i >> a) & 1) as f64).collect();
                v.push(1.0);
                v
            })
            .collect();
        let face = |a: usize, c: f64| {
            let mut h = vec![0.0; k + 1];
            h[a] = 1.0;
            h[k] = c;
            h
        };
        Polytope {
            k,
            vertices,
            lower_faces: (0..k).map(|a| face(a, 0.0)).collect(),
            upper_faces: (0..k).map(|a| face(a, -1.0)).collect(),
        }
    }

    /// Axis-aligned box [lo, hi].
    pub fn aabb(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let k = lo.len();
        if hi.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: hi.len() });
        }
        let rows: Vec<Vec<f64>> = (0..=k)
            .map(|i| {
                (0..=k)
                    .map(|j| match (i == k, j == k) {
                        (false, false) if i == j => hi[i] - lo[i],
                        (true, false) => lo[j],
                        (true, true) => 1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        let t = HomMatrix::from_rows(&rows)?;
        let inv = t.inverse().map_err(|_| Error::DegenerateShape("empty box"))?;
        Self::unit_hypercube(k).transform(&t, &inv)
    }

    /// Vertices by `direct`, face coefficients by `inverse`.
    pub fn transform(&self, direct: &HomMatrix, inverse: &HomMatrix) -> Result<Self> {
        if direct.k() != self.k || inverse.k() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: direct.k() });
        }
        let vertices: Vec<Vec<f64>> = self.vertices.iter().map(|v| direct.apply_homogeneous(v)).collect();
        for v in &vertices {
            dehomogenize(v)?;
        }
        // The weight sign is relative to the source vertices. A sign change
        // means the image wraps through infinity; a uniform flip reverses
        // every face inequality on Cartesian points.
        let flips: Vec<bool> =
            self.vertices.iter().zip(&vertices).map(|(a, b)| (a[self.k] < 0.0) != (b[self.k] < 0.0)).collect();
        if flips.iter().any(|&f| f != flips[0]) {
            return Err(Error::HomogeneousDivideByZero);
        }
        let sign = if flips[0] { -1.0 } else { 1.0 };
        let face = |h: &Vec<f64>| -> Vec<f64> { inverse.apply_column(h).into_iter().map(|c| c * sign).collect() };
        Ok(Polytope {
            k: self.k,
            vertices,
            lower_faces: self.lower_faces.iter().map(face).collect(),
            upper_faces: self.upper_faces.iter().map(face).collect(),
        })
    }

    /// Cartesian coordinates of vertex i.
    pub fn point(&self, i: usize) -> Result<Vec<f64>> {
        dehomogenize(&self.vertices[i])
    }

    pub fn points(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.vertices.len()).map(|i| self.point(i)).collect()
    }

    /// Largest violation of a face inequality by point `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lo = self.lower_faces.iter().map(|h| -Self::eval(h, x));
        let hi = self.upper_faces.iter().map(|h| Self::eval(h, x));
        lo.chain(hi).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Every vertex satisfies every face inequality within `tol`.
    pub fn dual_consistent(&self, tol: f64) -> bool {
        self.points().map(|ps| ps.iter().all(|p| self.contains(p, tol))).unwrap_or(false)
    }

    fn eval(h: &[f64], x: &[f64]) -> f64 {
        x.iter().zip(h).map(|(a, b)| a * b).sum::<f64>() + h[x.len()]
    }
}

pub(crate) fn corners(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let k = lo.len();
    (0..1usize << k).map(|i| (0..k).map(|a| if (i >> a) & 1 == 1 { hi[a] } else { lo[a] }).collect()).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Out,
    In,
    Cross,
}

/// Classifies the closed box [lo, hi] against a polytope. Contact of measure
/// zero counts as disjoint.
fn classify(p: &Polytope, pts: &[Vec<f64>], lo: &[f64], hi: &[f64]) -> Side {
    let k = p.k;
    for a in 0..k {
        if pts.iter().all(|v| v[a] <= lo[a] + TOL) || pts.iter().all(|v| v[a] >= hi[a] - TOL) {
            return Side::Out;
        }
    }
    let cs = corners(lo, hi);
    let mut inside = true;
    for h in &p.lower_faces {
        let vals: Vec<f64> = cs.iter().map(|c| Polytope::eval(h, c)).collect();
        if vals.iter().all(|&v| v <= TOL) {
            return Side::Out;
        }
        inside &= vals.iter().all(|&v| v >= -TOL);
    }
    for h in &p.upper_faces {
        let vals: Vec<f64> = cs.iter().map(|c| Polytope::eval(h, c)).collect();
        if vals.iter().all(|&v| v >= -TOL) {
            return Side::Out;
        }
        inside &= vals.iter().all(|&v| v <= TOL);
    }
    if inside {
        Side::In
    } else {
        Side::Cross
    }
}

/// Tree of the cells meeting the polytope at `precision`. Blocks still
/// ambiguous at that depth are included.
pub fn polytope_tree(store: &mut Store, p: &Polytope, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    if p.k != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: p.k });
    }
    let depth = space.depth_at(precision)?;
    let pts = p.points()?;
    Ok(poly_rec(store, p, &pts, space, depth, &Block::root()))
}

fn poly_rec(store: &mut Store, p: &Polytope, pts: &[Vec<f64>], space: &SpaceSpec, depth: u32, b: &Block) -> NodeRef {
    let (lo, hi) = b.unit_bounds(space);
    let k = space.dim();
    match classify(p, pts, &lo[..k], &hi[..k]) {
        Side::Out => NodeRef::WHITE,
        Side::In => NodeRef::BLACK,
        Side::Cross if b.level == depth => NodeRef::BLACK,
        Side::Cross => {
            let (bl, br) = b.children(space);
            let l = poly_rec(store, p, pts, space, depth, &bl);
            let r = poly_rec(store, p, pts, space, depth, &br);
            store.join(l, r)
        }
    }
}
