//! Homogeneous transform matrices, row-vector convention: `p' = [p, 1] * M`.

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

/// A (k+1)x(k+1) matrix acting on homogeneous row vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct HomMatrix {
    k: usize,
    m: Vec<f64>,
}

/// Elementary transforms. Axes are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    Homothety(Vec<f64>),
    Translation(Vec<f64>),
    /// Rotation in the plane (i, j) by an angle in radians, positive from i
    /// toward j.
    Rotation {
        i: usize,
        j: usize,
        angle: f64,
    },
    /// Perspective of center `c`: the plane `x_a = c_a` of every axis with a
    /// nonzero center coordinate goes to infinity.
    Perspective(Vec<f64>),
}

impl HomMatrix {
    pub fn identity(k: usize) -> Self {
        let n = k + 1;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = 1.0;
        }
        HomMatrix { k, m }
    }

    /// Builds a matrix from its rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: n });
        }
        let mut m = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.len() });
            }
            m.extend_from_slice(r);
        }
        Ok(HomMatrix { k: n - 1, m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i * (self.k + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.k + 1;
        self.m[i * n + j] = v;
    }

    pub fn elementary(k: usize, e: &Elementary) -> Result<Self> {
        let mut m = Self::identity(k);
        match e {
            Elementary::Homothety(rates) => {
                check_len(k, rates)?;
                for (a, &r) in rates.iter().enumerate() {
                    if r.abs() < EPS {
                        return Err(Error::SingularElementary);
                    }
                    m.set(a, a, r);
                }
            }
            Elementary::Translation(moves) => {
                check_len(k, moves)?;
                for (a, &t) in moves.iter().enumerate() {
                    m.set(k, a, t);
                }
            }
            Elementary::Rotation { i, j, angle } => {
                let (i, j) = (*i, *j);
                if i >= k || j >= k {
                    return Err(Error::AxisOutOfRange { axis: i.max(j), k: k as u32 });
                }
                if i == j {
                    return Err(Error::SingularElementary);
                }
                let (s, c) = angle.sin_cos();
                m.set(i, i, c);
                m.set(i, j, s);
                m.set(j, i, -s);
                m.set(j, j, c);
            }
            Elementary::Perspective(center) => {
                check_len(k, center)?;
                for (a, &c) in center.iter().enumerate() {
                    if c != 0.0 {
                        m.set(a, k, -1.0 / c);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Inverse of an elementary transform, built from its parameters.
    pub fn elementary_inverse(k: usize, e: &Elementary) -> Result<Self> {
        let inv = match e {
            Elementary::Homothety(rates) => {
                if rates.iter().any(|r| r.abs() < EPS) {
                    return Err(Error::SingularElementary);
                }
                Elementary::Homothety(rates.iter().map(|r| 1.0 / r).collect())
            }
            Elementary::Translation(moves) => Elementary::Translation(moves.iter().map(|t| -t).collect()),
            Elementary::Rotation { i, j, angle } => Elementary::Rotation { i: *i, j: *j, angle: -angle },
            Elementary::Perspective(center) => Elementary::Perspective(center.iter().map(|c| -c).collect()),
        };
        Self::elementary(k, &inv)
    }

    /// `self` applied first, then `other`.
    pub fn concat(&self, other: &HomMatrix) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: other.k });
        }
        let n = self.k + 1;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = (0..n).map(|t| self.get(i, t) * other.get(t, j)).sum();
            }
        }
        Ok(HomMatrix { k: self.k, m })
    }

    pub fn transpose(&self) -> Self {
        let n = self.k + 1;
        let mut t = self.clone();
        for i in 0..n {
            for j in 0..n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Entry-wise opposite.
    pub fn contrary(&self) -> Self {
        HomMatrix { k: self.k, m: self.m.iter().map(|v| -v).collect() }
    }

    /// General inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.k + 1;
        let mut a = self.m.clone();
        let mut inv = Self::identity(self.k).m;
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs())).unwrap_or(col);
            if a[piv * n + col].abs() < EPS {
                return Err(Error::SingularMatrix);
            }
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
                inv.swap(col * n + j, piv * n + j);
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv[col * n + j] /= d;
            }
            for i in 0..n {
                if i != col {
                    let f = a[i * n + col];
                    if f != 0.0 {
                        for j in 0..n {
                            a[i * n + j] -= f * a[col * n + j];
                            inv[i * n + j] -= f * inv[col * n + j];
                        }
                    }
                }
            }
        }
        Ok(HomMatrix { k: self.k, m: inv })
    }

    /// `[v] * M` for a homogeneous row vector of length k+1.
    pub fn apply_homogeneous(&self, v: &[f64]) -> Vec<f64> {
        let n = self.k + 1;
        (0..n).map(|j| (0..n).map(|i| v[i] * self.get(i, j)).sum()).collect()
    }

    /// `M * h` for a hyperplane coefficient column of length k+1.
    pub fn apply_column(&self, h: &[f64]) -> Vec<f64> {
        let n = self.k + 1;
        (0..n).map(|i| (0..n).map(|j| self.get(i, j) * h[j]).sum()).collect()
    }

    /// Maps a point of the frame.
    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_len(self.k, p)?;
        let mut v = p.to_vec();
        v.push(1.0);
        dehomogenize(&self.apply_homogeneous(&v))
    }

    pub fn max_abs_diff(&self, other: &HomMatrix) -> f64 {
        self.m.iter().zip(&other.m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn dehomogenize(v: &[f64]) -> Result<Vec<f64>> {
    let (w, xs) = v.split_last().expect("homogeneous vector is never empty");
    if w.abs() < EPS {
        return Err(Error::HomogeneousDivideByZero);
    }
    Ok(xs.iter().map(|x| x / w).collect())
}

fn check_len(k: usize, v: &[f64]) -> Result<()> {
    if v.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: v.len() });
    }
    Ok(())
}

/// A direct matrix kept together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform {
    pub direct: HomMatrix,
    pub inverse: HomMatrix,
}

impl Transform {
    pub fn identity(k: usize) -> Self {
        Transform { direct: HomMatrix::identity(k), inverse: HomMatrix::identity(k) }
    }

    /// Appends an elementary transform, applied after the current ones.
    pub fn then(&self, e: &Elementary) -> Result<Self> {
        let k = self.direct.k();
        let d = HomMatrix::elementary(k, e)?;
        let i = HomMatrix::elementary_inverse(k, e)?;
        Ok(Transform { direct: self.direct.concat(&d)?, inverse: i.concat(&self.inverse)? })
    }

    pub fn compose(&self, next: &Transform) -> Result<Self> {
        Ok(Transform { direct: self.direct.concat(&next.direct)?, inverse: next.inverse.concat(&self.inverse)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn elementary_inverses() {
        let es = [
            Elementary::Homothety(vec![2.0, -0.5, 3.0]),
            Elementary::Translation(vec![1.0, 0.25, -2.0]),
            Elementary::Rotation { i: 0, j: 2, angle: 0.7 },
            Elementary::Perspective(vec![0.0, 2.0, -3.0]),
        ];
        for e in &es {
            let m = HomMatrix::elementary(3, e).unwrap();
            let i = HomMatrix::elementary_inverse(3, e).unwrap();
            assert!(m.concat(&i).unwrap().max_abs_diff(&HomMatrix::identity(3)) < 1e-9, "{e:?}");
            assert!(m.inverse().unwrap().max_abs_diff(&i) < 1e-9);
        }
        assert!(matches!(
            HomMatrix::elementary(2, &Elementary::Homothety(vec![0.0, 1.0])),
            Err(Error::SingularElementary)
        ));
    }

    #[test]
    fn rotation_and_order() {
        let r = HomMatrix::elementary(2, &Elementary::Rotation { i: 0, j: 1, angle: FRAC_PI_2 }).unwrap();
        let e = r.apply(&[1.0, 0.0]).unwrap();
        assert!((e[0]).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
        let t = HomMatrix::elementary(2, &Elementary::Translation(vec![1.0, 0.0])).unwrap();
        let s = HomMatrix::elementary(2, &Elementary::Homothety(vec![2.0, 2.0])).unwrap();
        let ts = t.concat(&s).unwrap().apply(&[0.0, 0.0]).unwrap();
        let st = s.concat(&t).unwrap().apply(&[0.0, 0.0]).unwrap();
        assert_eq!(ts, vec![2.0, 0.0]);
        assert_eq!(st, vec![1.0, 0.0]);
        let back =
            t.concat(&HomMatrix::elementary_inverse(2, &Elementary::Translation(vec![1.0, 0.0])).unwrap()).unwrap();
        assert_eq!(back, HomMatrix::identity(2));
    }

    #[test]
    fn perspective_sends_center_plane_to_infinity() {
        let p = HomMatrix::elementary(1, &Elementary::Perspective(vec![2.0])).unwrap();
        assert!(matches!(p.apply(&[2.0]), Err(Error::HomogeneousDivideByZero)));
        assert_eq!(p.apply(&[1.0]).unwrap(), vec![2.0]);
    }
}
