//! Functional statistics and scaling.

use std::collections::HashMap;

use super::convert::leaf_value;
use crate::error::{Error, Result};
use crate::tree::{NodeRef, Store};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionalStats {
    pub fmin: f64,
    pub fmax: f64,
    pub center: f64,
    pub dispersion: f64,
}

/// Extremes over black leaves; center and dispersion by the balanced
/// recursion: a node averages its sons' centers and combines their variances
/// with half the squared center gap. White sons are skipped, so a node with
/// one white son passes the other son's statistics through.
///
/// Leaves are not weighted by size. Plain black leaves count as value 1.
pub fn stats(store: &Store, pyramid: NodeRef) -> Result<FunctionalStats> {
    fn rec(
        store: &Store,
        n: NodeRef,
        memo: &mut HashMap<NodeRef, Option<(f64, f64, f64, f64)>>,
    ) -> Option<(f64, f64, f64, f64)> {
        if let Some(&m) = memo.get(&n) {
            return m;
        }
        let m = match store.children(n) {
            None => leaf_value(store, n).map(|v| (v, v, v, 0.0)),
            Some((l, r)) => match (rec(store, l, memo), rec(store, r, memo)) {
                (Some(a), Some(b)) => {
                    let center = (a.2 + b.2) / 2.0;
                    let var = (a.3 + b.3) / 2.0 + (a.2 - b.2).powi(2) / 4.0;
                    Some((a.0.min(b.0), a.1.max(b.1), center, var))
                }
                (a, b) => a.or(b),
            },
        };
        memo.insert(n, m);
        m
    }
    let (fmin, fmax, center, var) = rec(store, pyramid, &mut HashMap::new()).ok_or(Error::EmptyPyramid)?;
    let dispersion = if var > 0.0 { var.sqrt() } else { 0.0 };
    Ok(FunctionalStats { fmin, fmax, center, dispersion })
}

/// Maps every value v to `(v - center) / dispersion`.
pub fn scale(store: &mut Store, pyramid: NodeRef, center: f64, dispersion: f64) -> Result<NodeRef> {
    if dispersion == 0.0 {
        return Err(Error::ZeroDispersion);
    }
    let mut memo = HashMap::new();
    Ok(store.map_leaves(pyramid, &mut memo, &mut |s, n| match leaf_value(s, n) {
        None => n,
        Some(v) => s.valued((v - center) / dispersion),
    }))
}
