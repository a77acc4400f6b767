//! Level-synchronous execution on a pyramidal processor array.
//!
//! Slot 0 is unused, slot 1 holds the root and the sons of slot `n` live in
//! slots `2n` and `2n + 1`, so level `L` occupies slots `[2^L, 2^(L+1))`.
//! Every branch is developed down to the deepest operand, losing the
//! compression of the tree; the host drives the recursion one level per
//! step.

use std::ops::Range;

use super::kernel::{height, operands, terminal};
use super::trace::Trace;
use crate::error::{Error, Result};
use crate::setops::BoolOp;
use crate::tree::{NodeRef, SpaceSpec, Store};

/// A machine with `2^log_processors` (possibly virtual) processors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyncMachine {
    pub log_processors: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyncReport {
    pub result: NodeRef,
    /// Depth of the developed pyramid.
    pub depth: u32,
    /// Active slots at each step.
    pub active: Vec<Range<u64>>,
    pub trace: Trace,
}

impl SyncMachine {
    /// Deepest pyramid the machine holds: slots up to `2^(depth+1) - 1`.
    pub fn capacity(&self) -> u32 {
        self.log_processors.saturating_sub(1)
    }

    pub fn execute(
        &self,
        store: &mut Store,
        op: BoolOp,
        inputs: &[NodeRef],
        space: &SpaceSpec,
        precision: u32,
    ) -> Result<SyncReport> {
        let (a, b) = operands(op, inputs)?;
        let limit = space.depth_at(precision)?;
        let depth = height(store, a).max(height(store, b)).min(limit);
        if depth > self.capacity() {
            return Err(Error::CapacityExceeded { depth, capacity: self.capacity() });
        }
        let mut trace = Trace::default();
        let mut active = Vec::new();
        let mut step = 0u64;
        let record = |trace: &mut Trace, active: &mut Vec<Range<u64>>, step: &mut u64, level: u32, event| {
            let slots = (1u64 << level)..(1u64 << (level + 1));
            for s in slots.clone() {
                trace.push(*step, s, event, 1);
            }
            active.push(slots);
            *step += 1;
        };
        // Descent: level L holds the operand nodes of slots [2^L, 2^(L+1)).
        let mut levels: Vec<Vec<(NodeRef, NodeRef)>> = vec![vec![(a, b)]];
        for level in 0..depth {
            record(&mut trace, &mut active, &mut step, level, "descend");
            let next: Vec<(NodeRef, NodeRef)> = levels[level as usize]
                .iter()
                .flat_map(|&(x, y)| {
                    let (xl, xr) = store.split(x);
                    let (yl, yr) = store.split(y);
                    [(xl, yl), (xr, yr)]
                })
                .collect();
            levels.push(next);
        }
        record(&mut trace, &mut active, &mut step, depth, "terminal");
        let mut results: Vec<NodeRef> =
            levels[depth as usize].iter().map(|&(x, y)| terminal(store, op, x, y, limit - depth)).collect();
        for level in (0..depth).rev() {
            record(&mut trace, &mut active, &mut step, level, "ascend");
            results = results.chunks(2).map(|p| store.join(p[0], p[1])).collect();
        }
        Ok(SyncReport { result: results[0], depth, active, trace })
    }
}
