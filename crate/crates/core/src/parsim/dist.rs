//! Message-driven execution on `2^p` processors.
//!
//! A processor keeps left branches and sends the right branch of a node at
//! level `n - 1` to the processor `2^(p-n)` places further on. Once the
//! offset drops below one, or the target already holds a branch, the right
//! branch is processed locally. The sender processes its left branch and then
//! waits for the acknowledgement carrying the right result.
//!
//! Time is simulated: visiting a node costs one step and a message takes `p`
//! steps, one per network stage.

use super::kernel::{operands, terminal};
use super::trace::Trace;
use crate::error::Result;
use crate::setops::BoolOp;
use crate::tree::{NodeRef, SpaceSpec, Store};

#[derive(Clone, Debug, PartialEq)]
pub struct AsyncReport {
    pub result: NodeRef,
    pub messages: usize,
    pub acks: usize,
    /// Branches received by each processor; processor 0 counts the root.
    pub branches: Vec<usize>,
    pub makespan: u64,
    pub trace: Trace,
}

struct Sim<'a> {
    store: &'a mut Store,
    op: BoolOp,
    limit: u32,
    p: u32,
    branches: Vec<usize>,
    trace: Trace,
    messages: usize,
}

impl Sim<'_> {
    fn process(&mut self, proc: u64, a: NodeRef, b: NodeRef, level: u32, t: u64) -> (NodeRef, u64) {
        if (self.store.is_terminal(a) && self.store.is_terminal(b)) || level == self.limit {
            let r = terminal(self.store, self.op, a, b, self.limit - level);
            return (r, t + 1);
        }
        let (al, ar) = self.store.split(a);
        let (bl, br) = self.store.split(b);
        let n = level + 1;
        let dest = (n <= self.p).then(|| proc + (1u64 << (self.p - n))).filter(|&d| self.branches[d as usize] == 0);
        match dest {
            Some(dest) => {
                let size = self.store.tree_size(ar) + self.store.tree_size(br);
                self.messages += 1;
                self.branches[dest as usize] += 1;
                self.trace.push(t, proc, "send", size);
                let arrival = t + u64::from(self.p);
                self.trace.push(arrival, dest, "receive", size);
                let (rr, done) = self.process(dest, ar, br, n, arrival);
                let rsize = self.store.tree_size(rr);
                self.trace.push(done, dest, "ack", rsize);
                let back = done + u64::from(self.p);
                let (rl, tl) = self.process(proc, al, bl, n, t + 1);
                let resume = tl.max(back);
                self.trace.push(resume, proc, "ack-received", rsize);
                (self.store.join(rl, rr), resume + 1)
            }
            None => {
                let (rl, tl) = self.process(proc, al, bl, n, t + 1);
                let (rr, tr) = self.process(proc, ar, br, n, tl);
                (self.store.join(rl, rr), tr)
            }
        }
    }
}

/// Runs a Boolean kernel on a `2^p`-processor machine starting from
/// processor 0.
pub fn async_execute(
    store: &mut Store,
    op: BoolOp,
    inputs: &[NodeRef],
    space: &SpaceSpec,
    precision: u32,
    p: u32,
) -> Result<AsyncReport> {
    let (a, b) = operands(op, inputs)?;
    let limit = space.depth_at(precision)?;
    if p > 20 {
        return Err(crate::error::Error::CapacityExceeded { depth: p, capacity: 20 });
    }
    let mut branches = vec![0; 1 << p];
    branches[0] = 1;
    let mut sim = Sim { store, op, limit, p, branches, trace: Trace::default(), messages: 0 };
    sim.trace.push(0, 0, "start", 0);
    let (result, makespan) = sim.process(0, a, b, 0, 0);
    sim.trace.push(makespan, 0, "done", 0);
    let mut trace = sim.trace;
    trace.events.sort_by_key(|e| (e.step, e.processor));
    let acks = trace.count("ack");
    Ok(AsyncReport { result, messages: sim.messages, acks, branches: sim.branches, makespan, trace })
}
