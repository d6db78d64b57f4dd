//! Driving a [`DynamicPiercer`] from an update script.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dynamic::{DynamicConfig, DynamicPiercer, Mode};
use crate::error::{Error, Result};
use crate::geom::unpierced_indices;
use crate::harness::format::ScriptOp;

/// One line of replay output: emitted at every rebuild and once at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayEvent {
    pub event: String,
    pub update: usize,
    pub live: usize,
    pub size: usize,
    pub reconstructions: u64,
    pub verify_failures: u64,
    pub mean_update_us: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ReplayOptions {
    pub mode: Mode,
    pub seed: u64,
    pub verify_each: bool,
}

/// Replays `ops`; a bad delete aborts with its 1-based script position.
pub fn replay(ops: &[ScriptOp], opts: &ReplayOptions) -> Result<Vec<ReplayEvent>> {
    let mut d = DynamicPiercer::new(DynamicConfig {
        mode: opts.mode,
        seed: opts.seed,
        ..Default::default()
    });
    let mut events = Vec::new();
    let mut failures = 0u64;
    let mut spent = 0f64;
    for (i, op) in ops.iter().enumerate() {
        let start = Instant::now();
        let rebuilt = match op {
            ScriptOp::Insert { b } => d.insert(b.clone()),
            ScriptOp::Delete { b } => d.delete(b),
        }
        .map_err(|e| match e {
            Error::InvalidOp(m) | Error::Usage(m) => Error::Usage(format!("update {}: {m}", i + 1)),
            other => other,
        })?;
        spent += start.elapsed().as_secs_f64();
        if opts.verify_each && !unpierced_indices(d.boxes(), d.points()).is_empty() {
            failures += 1;
        }
        let ev = |name: &str| ReplayEvent {
            event: name.into(),
            update: i + 1,
            live: d.len(),
            size: d.points().len(),
            reconstructions: d.stats().reconstructions,
            verify_failures: failures,
            mean_update_us: spent * 1e6 / (i + 1) as f64,
        };
        if rebuilt {
            events.push(ev("reconstruct"));
        }
        if i + 1 == ops.len() {
            events.push(ev("summary"));
        }
    }
    if ops.is_empty() {
        events.push(ReplayEvent {
            event: "summary".into(),
            update: 0,
            live: 0,
            size: 0,
            reconstructions: 0,
            verify_failures: 0,
            mean_update_us: 0.0,
        });
    }
    Ok(events)
}
