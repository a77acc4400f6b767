//! Reentrant Omega network over `2^p` processors.
//!
//! Each stage is a perfect shuffle followed by an exchange that sets the low
//! bit of the position to the next destination bit, most significant first.
//! After `p` stages the position is the destination, wherever the message
//! started.

use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Port {
    /// Taken when the destination bit is 0.
    High,
    Low,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hop {
    /// 1-based stage.
    pub stage: u32,
    pub from: u64,
    pub to: u64,
    pub port: Port,
}

/// The `p` hops from `from` to `to`.
pub fn omega_route(from: u64, to: u64, p: u32) -> Vec<Hop> {
    let mask = if p == 0 { 0 } else { u64::MAX >> (64 - p) };
    let mut at = from & mask;
    (1..=p)
        .map(|stage| {
            let bit = (to >> (p - stage)) & 1;
            let next = ((at << 1) | bit) & mask;
            let hop = Hop { stage, from: at, to: next, port: if bit == 0 { Port::High } else { Port::Low } };
            at = next;
            hop
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delivery {
    pub message: usize,
    /// Step at which the last hop completes.
    pub arrival: u64,
    /// Steps spent waiting for a busy link.
    pub waited: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSchedule {
    pub deliveries: Vec<Delivery>,
    pub makespan: u64,
    /// Number of times a message found its next link busy.
    pub collisions: usize,
}

/// Store-and-forward simulation of `(from, to, size)` messages, all injected
/// at step 0. A hop holds its link for `max(size, 1)` steps. The first
/// message to request a free link takes it; one more may queue on it and the
/// others stay blocked where they are until the queue slot frees. Ties go to
/// the earlier message in input order.
pub fn omega_simulate(messages: &[(u64, u64, usize)], p: u32) -> OmegaSchedule {
    struct State {
        route: Vec<Hop>,
        next_hop: usize,
        ready: u64,
        waited: u64,
        queued: bool,
        blocked: bool,
    }
    let mut st: Vec<State> = messages
        .iter()
        .map(|&(f, t, _)| State {
            route: omega_route(f, t, p),
            next_hop: 0,
            ready: 0,
            waited: 0,
            queued: false,
            blocked: false,
        })
        .collect();
    // Link (stage, target position) -> step at which it frees up, and its waiter.
    let mut busy: HashMap<(u32, u64), u64> = HashMap::new();
    let mut waiter: HashMap<(u32, u64), usize> = HashMap::new();
    let mut collisions = 0;
    let mut deliveries: Vec<Option<Delivery>> = vec![None; messages.len()];
    let mut now = 0u64;
    let mut left = st.iter().filter(|s| !s.route.is_empty()).count();
    for (i, s) in st.iter().enumerate() {
        if s.route.is_empty() {
            deliveries[i] = Some(Delivery { message: i, arrival: 0, waited: 0 });
        }
    }
    while left > 0 {
        for i in 0..st.len() {
            let s = &st[i];
            if s.next_hop >= s.route.len() || s.ready > now {
                continue;
            }
            let hop = s.route[s.next_hop];
            let link = (hop.stage, hop.to);
            let free = busy.get(&link).is_none_or(|&f| f <= now);
            let first_in_line = waiter.get(&link).is_none_or(|&w| w == i);
            if free && first_in_line {
                waiter.remove(&link);
                let dur = messages[i].2.max(1) as u64;
                busy.insert(link, now + dur);
                let s = &mut st[i];
                s.queued = false;
                s.blocked = false;
                s.next_hop += 1;
                s.ready = now + dur;
                if s.next_hop == s.route.len() {
                    deliveries[i] = Some(Delivery { message: i, arrival: s.ready, waited: s.waited });
                    left -= 1;
                }
            } else {
                let s = &mut st[i];
                if !s.queued && !s.blocked {
                    collisions += 1;
                }
                if !s.queued && !waiter.contains_key(&link) {
                    waiter.insert(link, i);
                    s.queued = true;
                } else if !s.queued {
                    s.blocked = true;
                }
                s.waited += 1;
            }
        }
        now += 1;
    }
    let deliveries: Vec<Delivery> = deliveries.into_iter().map(|d| d.expect("every message delivered")).collect();
    let makespan = deliveries.iter().map(|d| d.arrival).max().unwrap_or(0);
    OmegaSchedule { deliveries, makespan, collisions }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_to_five() {
        let r = omega_route(2, 5, 3);
        let ports: Vec<Port> = r.iter().map(|h| h.port).collect();
        assert_eq!(ports, vec![Port::Low, Port::High, Port::Low]);
        assert_eq!(r.last().unwrap().to, 5);
        assert_eq!(omega_route(6, 6, 3).len(), 3);
        assert!(omega_route(0, 0, 0).is_empty());
    }

    #[test]
    fn contention() {
        assert_eq!(omega_simulate(&[(0, 5, 1)], 3).makespan, 3);
        let disjoint = omega_simulate(&[(0, 0, 1), (1, 7, 1)], 3);
        assert_eq!((disjoint.makespan, disjoint.collisions), (3, 0));
        // Both need the stage-1 link into position 0 at step 0.
        let shared = omega_simulate(&[(0, 0, 1), (4, 0, 1)], 3);
        assert!(shared.collisions >= 1);
        assert_eq!(shared.deliveries[0].arrival, 3);
        assert!(shared.deliveries[1].arrival > 3);
    }
}
