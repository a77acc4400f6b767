//! Execution traces.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: u64,
    pub processor: u64,
    pub event: &'static str,
    pub payload: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn push(&mut self, step: u64, processor: u64, event: &'static str, payload: usize) {
        self.events.push(TraceEvent { step, processor, event, payload });
    }

    pub fn count(&self, event: &str) -> usize {
        self.events.iter().filter(|e| e.event == event).count()
    }

    /// `step,processor,event,payload-size` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,processor,event,payload-size\n");
        for e in &self.events {
            let _ = writeln!(out, "{},{},{},{}", e.step, e.processor, e.event, e.payload);
        }
        out
    }
}
