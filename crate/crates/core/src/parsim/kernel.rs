//! Work done at the leaves of a parallel traversal.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::setops::{combine, BoolOp};
use crate::tree::build::cut;
use crate::tree::{NodeRef, Store};

/// Operands of a Boolean kernel.
pub(crate) fn operands(op: BoolOp, inputs: &[NodeRef]) -> Result<(NodeRef, NodeRef)> {
    if inputs.len() != op.arity() {
        return Err(Error::ArityMismatch { op: op.name(), expected: op.arity() });
    }
    Ok((inputs[0], inputs.get(1).copied().unwrap_or(NodeRef::WHITE)))
}

/// The sequential kernel on a pair of co-located subtrees with `remaining`
/// levels to the depth limit.
pub(crate) fn terminal(store: &mut Store, op: BoolOp, a: NodeRef, b: NodeRef, remaining: u32) -> NodeRef {
    match op {
        BoolOp::Assert => cut(store, a, remaining, &mut HashMap::new()),
        _ => combine(store, op, a, b, remaining, &mut HashMap::new()),
    }
}

/// Depth of the deepest internal path.
pub(crate) fn height(store: &Store, n: NodeRef) -> u32 {
    fn rec(store: &Store, n: NodeRef, memo: &mut HashMap<NodeRef, u32>) -> u32 {
        if store.is_terminal(n) {
            return 0;
        }
        if let Some(&h) = memo.get(&n) {
            return h;
        }
        let h = match store.children(n) {
            Some((l, r)) => 1 + rec(store, l, memo).max(rec(store, r, memo)),
            None => 0,
        };
        memo.insert(n, h);
        h
    }
    rec(store, n, &mut HashMap::new())
}
