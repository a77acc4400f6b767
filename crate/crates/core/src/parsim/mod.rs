//! Deterministic simulation of parallel tree traversals: a synchronous
//! pyramidal array, an asynchronous message-passing machine, and the Omega
//! network that carries its messages.

mod dist;
mod kernel;
mod omega;
mod sync;
mod trace;

pub use dist::{async_execute, AsyncReport};
pub use omega::{omega_route, omega_simulate, Delivery, Hop, OmegaSchedule, Port};
pub use sync::{SyncMachine, SyncReport};
pub use trace::{Trace, TraceEvent};

use crate::error::Result;
use crate::setops::BoolOp;
use crate::tree::{NodeRef, SpaceSpec, Store};

/// Runs a Boolean kernel on a synchronous machine with `2^log_processors`
/// processors.
pub fn sync_execute(
    store: &mut Store,
    op: BoolOp,
    inputs: &[NodeRef],
    space: &SpaceSpec,
    precision: u32,
    log_processors: u32,
) -> Result<SyncReport> {
    SyncMachine { log_processors }.execute(store, op, inputs, space, precision)
}
