//! Two-point blending between the models of sibling data clouds.
//!
//! Both formulas are reproduced as written, including their coefficient
//! pairing: the weight growing with the distance from the g-side center
//! multiplies `fg`, so `x = xg` yields `fd`.

use crate::error::{Error, Result};

/// `f = (x - xg)/(xd - xg) * fg + (xd - x)/(xd - xg) * fd`.
pub fn interpolate(x: f64, xg: f64, xd: f64, fg: f64, fd: f64) -> Result<f64> {
    if xg == xd {
        return Err(Error::CoincidentCenters);
    }
    let w = xd - xg;
    Ok((x - xg) / w * fg + (xd - x) / w * fd)
}

/// `f = |CgM . CgCd| / |CgCd|^2 * fg + |MCd . CgCd| / |CgCd|^2 * fd`.
pub fn barycentric_interpolate(m: &[f64], cg: &[f64], cd: &[f64], fg: f64, fd: f64) -> Result<f64> {
    if cg.len() != m.len() {
        return Err(Error::DimensionMismatch { expected: m.len(), found: cg.len() });
    }
    if cd.len() != m.len() {
        return Err(Error::DimensionMismatch { expected: m.len(), found: cd.len() });
    }
    let axis: Vec<f64> = cg.iter().zip(cd).map(|(g, d)| d - g).collect();
    let norm2: f64 = axis.iter().map(|a| a * a).sum();
    if norm2 == 0.0 {
        return Err(Error::CoincidentCenters);
    }
    let dot = |from: &[f64], to: &[f64]| -> f64 { from.iter().zip(to).zip(&axis).map(|((f, t), a)| (t - f) * a).sum() };
    Ok(dot(cg, m).abs() / norm2 * fg + dot(m, cd).abs() / norm2 * fd)
}
