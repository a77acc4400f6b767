//! Ranking a recognition base by exclusive-or mass against a probe.

use crate::error::{Error, Result};
use crate::setops::exclude;
use crate::tree::{mass, NodeRef, SpaceSpec, Store};

/// `(label, xor_mass)` for every base entry, most similar first. Ties keep
/// label order.
pub fn similarity_rank(
    store: &mut Store,
    base: &[(String, NodeRef)],
    probe: NodeRef,
    space: &SpaceSpec,
    precision: u32,
) -> Result<Vec<(String, u128)>> {
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let mut out = Vec::with_capacity(base.len());
    for (label, t) in base {
        let x = exclude(store, *t, probe, space);
        out.push((label.clone(), mass(store, x, space, precision)?));
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}
