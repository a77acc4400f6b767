//! Inertia eigen-frames and eigen trees.

use super::moments::{center_moments, MomentList};
use crate::error::{Error, Result};
use crate::geom::{transform_tree, HomMatrix, Transform};
use crate::tree::{NodeRef, SpaceSpec, Store};

const MAX_SWEEPS: usize = 100;
const JACOBI_TOL: f64 = 1e-12;
const DEGENERATE_TOL: f64 = 1e-9;

/// Principal standard deviation of a normalized eigen tree, in unit-frame
/// coordinates.
pub const SIGMA_REF: f64 = 0.125;

/// Gravity center and principal axes, in cell-index coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenFrame {
    pub mass: f64,
    pub xg: Vec<f64>,
    /// `v[j][i]` is component `j` of eigenvector `i`.
    pub v: Vec<Vec<f64>>,
    /// Descending.
    pub lambda: Vec<f64>,
    /// `M(u_i^3)` along each oriented axis.
    pub third_moments: Vec<f64>,
    /// Set when two eigenvalues coincide or a third moment vanishes, so that
    /// some axis direction is arbitrary.
    pub degenerate: bool,
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns the eigenvalues (unsorted) and the eigenvectors as columns.
#[allow(clippy::needless_range_loop)]
pub fn jacobi(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let k = a.len();
    let mut v: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let norm: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        // Absolute tolerance, or the rounding floor for large matrices.
        if off.sqrt() <= JACOBI_TOL || off.sqrt() <= f64::EPSILON * norm {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (rp, rq) = (row[p], row[q]);
                    row[p] = c * rp - s * rq;
                    row[q] = s * rp + c * rq;
                }
                for r in 0..k {
                    let (pr, qr) = (a[p][r], a[q][r]);
                    a[p][r] = c * pr - s * qr;
                    a[q][r] = s * pr + c * qr;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (rp, rq) = (row[p], row[q]);
                    row[p] = c * rp - s * rq;
                    row[q] = s * rp + c * rq;
                }
            }
        }
    }
    ((0..k).map(|i| a[i][i]).collect(), v)
}

/// Inertia matrix `In(i, j) = M(x_i x_j)` of centered moments.
pub fn inertia(centered: &MomentList) -> Vec<Vec<f64>> {
    let k = centered.k();
    (0..k).map(|i| (0..k).map(|j| centered.of_axes(&[i, j])).collect()).collect()
}

/// Principal axes of a moment list (raw or centered), oriented so that every
/// third moment along an axis is non-negative.
pub fn eigen_frame(m: &MomentList) -> Result<EigenFrame> {
    let xg = m.gravity_center()?;
    let c = center_moments(m)?;
    let k = m.k();
    let mass = m.mass();
    let (vals, vecs) = jacobi(inertia(&c));
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let lambda: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut v: Vec<Vec<f64>> = (0..k).map(|j| order.iter().map(|&i| vecs[j][i]).collect()).collect();
    let scale = lambda[0].abs().max(f64::MIN_POSITIVE);
    let mut degenerate = lambda.windows(2).any(|w| (w[0] - w[1]).abs() <= DEGENERATE_TOL * scale);
    let mut third_moments = Vec::with_capacity(k);
    for i in 0..k {
        let mut t = 0.0;
        for a in 0..k {
            for b in 0..k {
                for d in 0..k {
                    t += v[a][i] * v[b][i] * v[d][i] * c.of_axes(&[a, b, d]);
                }
            }
        }
        // Skewness-scale threshold: raw sums carry rounding of order
        // mass * sigma^3 * eps.
        let sigma = (lambda[i].max(0.0) / mass).sqrt();
        if t.abs() <= DEGENERATE_TOL * mass * sigma.powi(3).max(1.0) {
            degenerate = true;
        } else if t < 0.0 {
            t = -t;
            for row in v.iter_mut() {
                row[i] = -row[i];
            }
        }
        third_moments.push(t);
    }
    Ok(EigenFrame { mass, xg, v, lambda, third_moments, degenerate })
}

/// Centered moments seen from the oriented principal axes, with lengths in
/// units of the principal standard deviation and divided by the mass. The
/// result does not change under translation, rotation or scaling of the set,
/// up to digitization.
pub fn normalized_moments(m: &MomentList) -> Result<MomentList> {
    let frame = eigen_frame(m)?;
    let sigma = (frame.lambda[0] / frame.mass).sqrt();
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::DegenerateShape("principal inertia is zero"));
    }
    Ok(center_moments(m)?.in_axes(&frame.v, 1.0 / sigma, frame.mass))
}

/// Map from the unit frame to the eigen frame centered in the unit frame.
/// `precision` is the one the frame's moments were taken at.
pub fn eigen_transform(frame: &EigenFrame, precision: u32, normalize: bool) -> Result<Transform> {
    let k = frame.xg.len();
    let cells = f64::from(1u32 << precision);
    let xg: Vec<f64> = frame.xg.iter().map(|g| (g + 0.5) / cells).collect();
    let s = if normalize {
        let sigma = (frame.lambda[0] / frame.mass).sqrt() / cells;
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::DegenerateShape("principal inertia is zero"));
        }
        SIGMA_REF / sigma
    } else {
        1.0
    };
    let mut direct = vec![vec![0.0; k + 1]; k + 1];
    let mut inverse = vec![vec![0.0; k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            direct[j][i] = frame.v[j][i] * s;
            inverse[i][j] = frame.v[j][i] / s;
        }
        direct[k][i] = 0.5 - s * (0..k).map(|j| xg[j] * frame.v[j][i]).sum::<f64>();
        inverse[k][i] = xg[i] - 0.5 / s * (0..k).map(|j| frame.v[i][j]).sum::<f64>();
    }
    direct[k][k] = 1.0;
    inverse[k][k] = 1.0;
    Ok(Transform { direct: HomMatrix::from_rows(&direct)?, inverse: HomMatrix::from_rows(&inverse)? })
}

/// The set redrawn in its eigen frame: gravity center at the middle of the
/// space, principal axes along the coordinate axes in decreasing inertia
/// order. With `normalize`, scaled so the principal standard deviation is
/// [`SIGMA_REF`].
pub fn eigen_tree(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    frame: &EigenFrame,
    precision_in: u32,
    precision_out: u32,
    normalize: bool,
) -> Result<NodeRef> {
    if frame.xg.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: frame.xg.len() });
    }
    let t = eigen_transform(frame, precision_in, normalize)?;
    transform_tree(store, tree, space, &t, precision_in, precision_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::moments;
    use crate::tree::add_cell;

    #[test]
    fn jacobi_two_by_two() {
        let (vals, v) = jacobi(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let mut sorted = vals.clone();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - 1.0).abs() < 1e-12 && (sorted[1] - 3.0).abs() < 1e-12);
        let dot = v[0][0] * v[0][1] + v[1][0] * v[1][1];
        assert!(dot.abs() < 1e-12);
    }

    #[test]
    fn rectangle_axes() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 3).unwrap();
        let mut t = NodeRef::WHITE;
        for x in 1..3 {
            for y in 2..6 {
                t = add_cell(&mut s, t, &sp, &[x, y], None).unwrap();
            }
        }
        let f = eigen_frame(&moments(&s, t, &sp, 3).unwrap()).unwrap();
        assert_eq!(f.xg, vec![1.5, 3.5]);
        assert!(f.v[1][0].abs() > 1.0 - 1e-12);
        assert!(f.lambda[0] > f.lambda[1]);
        // Symmetric rectangle: both third moments vanish.
        assert!(f.degenerate);
        let e = eigen_tree(&mut s, t, &sp, &f, 3, 3, false).unwrap();
        assert_eq!(crate::tree::mass(&s, e, &sp, 3).unwrap(), 8);
    }

    #[test]
    fn normalized_rectangle() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 4).unwrap();
        let mut t = NodeRef::WHITE;
        for x in 3..12 {
            for y in 5..8 {
                t = add_cell(&mut s, t, &sp, &[x, y], None).unwrap();
            }
        }
        let n = normalized_moments(&moments(&s, t, &sp, 4).unwrap()).unwrap();
        assert!((n.mass() - 1.0).abs() < 1e-12);
        assert!((n.get(&[2, 0]) - 1.0).abs() < 1e-12);
        assert!(n.get(&[1, 1]).abs() < 1e-12);
        // Variance ratio of a 9x3 box: (9^2 - 1) / (3^2 - 1).
        assert!((n.get(&[0, 2]) - 8.0 / 80.0).abs() < 1e-12);
    }
}
