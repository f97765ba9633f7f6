use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Event, EventKind, Network, Protocol, Simulation, Trace};
use crate::error::{Error, Result};

pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheduler {
    /// Uniform choice among enabled events.
    Random,
    /// Synchronous rounds: everyone wakes in round 0; each later round
    /// delivers the head of every channel that was nonempty when it began.
    Lockstep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub scheduler: Scheduler,
    pub step_cap: u64,
}

impl SimConfig {
    pub fn random(seed: u64) -> Self {
        SimConfig { seed, scheduler: Scheduler::Random, step_cap: DEFAULT_STEP_CAP }
    }

    pub fn lockstep() -> Self {
        SimConfig { seed: 0, scheduler: Scheduler::Lockstep, step_cap: DEFAULT_STEP_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Quiescent,
    /// Stopped at the step cap with events still enabled.
    StepCap,
    /// Ended early: a replayed trace prefix, or a lifted run stopped at a
    /// fibre violation.
    Prefix,
}

#[derive(Clone, Debug)]
pub struct RunResult<S> {
    pub status: RunStatus,
    pub steps: u64,
    pub messages: u64,
    pub trace: Trace,
    pub states: Vec<S>,
}

impl<S: Serialize> RunResult<S> {
    /// Final states keyed by vertex id.
    pub fn states_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, &S> = self.states.iter().enumerate().map(|(v, s)| (v.to_string(), s)).collect();
        serde_json::to_value(map).expect("states serialize")
    }
}

pub(crate) struct Driver {
    scheduler: Scheduler,
    rng: ChaCha8Rng,
}

impl Driver {
    pub(crate) fn new(cfg: &SimConfig) -> Self {
        Driver { scheduler: cfg.scheduler, rng: ChaCha8Rng::seed_from_u64(cfg.seed) }
    }

    /// The next batch of events; empty at quiescence.
    pub(crate) fn next_batch<P: Protocol>(&mut self, sim: &Simulation<'_, P>) -> Vec<Event> {
        match self.scheduler {
            Scheduler::Random => {
                let ev = sim.enabled();
                if ev.is_empty() {
                    ev
                } else {
                    vec![ev[self.rng.gen_range(0..ev.len())]]
                }
            }
            Scheduler::Lockstep => {
                let net = sim.network();
                let wake: Vec<Event> = (0..net.n()).filter(|&v| !sim.is_woken(v)).map(Event::Wakeup).collect();
                if !wake.is_empty() {
                    return wake;
                }
                let d = net.digraph();
                let mut heads: Vec<(usize, usize, usize)> = (0..d.arc_count())
                    .filter(|&a| sim.channel_len(a) > 0)
                    .map(|a| (d.arc(a).t, net.inport(a), a))
                    .collect();
                heads.sort_unstable();
                heads.into_iter().map(|(_, _, a)| Event::Deliver(a)).collect()
            }
        }
    }
}

pub fn run<P: Protocol>(net: &Network, proto: &P, inputs: &[P::Input], cfg: &SimConfig) -> Result<RunResult<P::State>> {
    let mut sim = Simulation::new(net, proto, inputs)?;
    let mut driver = Driver::new(cfg);
    loop {
        let batch = driver.next_batch(&sim);
        if batch.is_empty() {
            return Ok(sim.finish(RunStatus::Quiescent));
        }
        for ev in batch {
            if sim.steps() >= cfg.step_cap {
                return Ok(sim.finish(RunStatus::StepCap));
            }
            sim.execute(ev)?;
        }
    }
}

/// Re-executes the wakeups and deliveries of `trace`, checking every record
/// (including sends and their digests) against the regenerated run.
///
/// A prefix of a trace replays to the corresponding prefix of the run.
pub fn replay_trace<P: Protocol>(net: &Network, proto: &P, inputs: &[P::Input], trace: &Trace) -> Result<RunResult<P::State>> {
    let mut sim = Simulation::new(net, proto, inputs)?;
    let given = trace.events();
    let mut i = 0;
    while i < given.len() {
        let e = &given[i];
        let ev = match e.kind {
            EventKind::Wakeup => {
                if e.vertex >= net.n() || sim.is_woken(e.vertex) {
                    return Err(Error::Replay { index: i, reason: format!("process {} cannot wake", e.vertex) });
                }
                Event::Wakeup(e.vertex)
            }
            EventKind::Deliver => {
                let a = e
                    .port
                    .and_then(|p| net.arc_into(e.vertex, p))
                    .ok_or_else(|| Error::Replay { index: i, reason: "delivery names no channel".into() })?;
                match sim.head_digest(a) {
                    None => return Err(Error::Replay { index: i, reason: "delivery from an empty channel".into() }),
                    Some(h) if Some(h) != e.digest.as_deref() => {
                        return Err(Error::Replay { index: i, reason: "delivery out of FIFO order".into() })
                    }
                    Some(_) => Event::Deliver(a),
                }
            }
            EventKind::Send | EventKind::Halt => {
                return Err(Error::Replay { index: i, reason: "record not produced by the preceding event".into() })
            }
        };
        let before = sim.trace().len();
        sim.execute(ev)?;
        let produced = &sim.trace().events()[before..];
        for (j, rec) in produced.iter().enumerate() {
            let idx = before + j;
            if idx >= given.len() {
                break;
            }
            if &given[idx] != rec {
                return Err(Error::Replay { index: idx, reason: "record differs from the regenerated run".into() });
            }
        }
        i = sim.trace().len();
    }
    let status = if sim.is_quiescent() { RunStatus::Quiescent } else { RunStatus::Prefix };
    Ok(sim.finish(status))
}
