//! Deterministic asynchronous execution of anonymous protocols.
//!
//! Every ordered pair of adjacent processes has a FIFO channel (one per arc of
//! the ported symmetric digraph). An event is either the wakeup of a process
//! that has not woken yet or the delivery of the head message of a nonempty
//! channel. Schedulers pick among enabled events; everything else is
//! deterministic, so a seed and a configuration fix the whole run.

mod lifted;
mod network;
mod run;
mod trace;

use std::collections::VecDeque;
use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};

pub use lifted::{lockstep_lifted_run, FibreViolation, LiftedRun};
pub use network::Network;
pub use run::{replay_trace, run, RunResult, RunStatus, Scheduler, SimConfig, DEFAULT_STEP_CAP};
pub use trace::{digest_payload, EventKind, Trace, TraceEvent};

/// Messages queued by a handler, as `(outport, message)` pairs.
#[derive(Debug)]
pub struct Outbox<M> {
    sends: Vec<(usize, M)>,
}

impl<M> Default for Outbox<M> {
    fn default() -> Self {
        Outbox::new()
    }
}

impl<M> Outbox<M> {
    pub fn new() -> Self {
        Outbox { sends: Vec::new() }
    }

    pub fn sends(&self) -> &[(usize, M)] {
        &self.sends
    }

    /// Queues `msg` on the channel behind port `port` (1-based).
    pub fn send(&mut self, port: usize, msg: M) {
        self.sends.push((port, msg));
    }

    pub fn len(&self) -> usize {
        self.sends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sends.is_empty()
    }
}

/// A distributed algorithm given as pure event handlers.
///
/// Processes are anonymous: a handler sees only its own state, its degree
/// (fixed at `init`) and port numbers.
pub trait Protocol {
    /// Per-process input, such as a role assigned by an earlier phase.
    type Input: Clone;
    type State: Clone + PartialEq + Debug + Serialize;
    type Msg: Clone + Debug + Serialize;

    fn init(&self, degree: usize, input: &Self::Input) -> Self::State;

    fn on_wakeup(&self, state: &mut Self::State, out: &mut Outbox<Self::Msg>);

    fn on_receive(&self, state: &mut Self::State, port: usize, msg: &Self::Msg, out: &mut Outbox<Self::Msg>);

    fn is_halted(&self, _state: &Self::State) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    Wakeup(usize),
    /// Delivery of the head message on the channel of this arc.
    Deliver(usize),
}

#[derive(Clone, Debug)]
struct Envelope<M> {
    msg: M,
    digest: String,
}

/// Single-step execution state. [`run`] drives it with a scheduler; lifted
/// runs and replays drive it event by event.
pub struct Simulation<'a, P: Protocol> {
    net: &'a Network,
    proto: &'a P,
    states: Vec<P::State>,
    woken: Vec<bool>,
    halted: Vec<bool>,
    channels: Vec<VecDeque<Envelope<P::Msg>>>,
    in_flight: usize,
    trace: Trace,
    steps: u64,
    messages: u64,
}

impl<'a, P: Protocol> Simulation<'a, P> {
    pub fn new(net: &'a Network, proto: &'a P, inputs: &[P::Input]) -> Result<Self> {
        if inputs.len() != net.n() {
            return Err(Error::Simulation(format!("{} inputs for {} processes", inputs.len(), net.n())));
        }
        let states = (0..net.n()).map(|v| proto.init(net.degree(v), &inputs[v])).collect();
        Ok(Simulation {
            net,
            proto,
            states,
            woken: vec![false; net.n()],
            halted: vec![false; net.n()],
            channels: (0..net.digraph().arc_count()).map(|_| VecDeque::new()).collect(),
            in_flight: 0,
            trace: Trace::default(),
            steps: 0,
            messages: 0,
        })
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    pub fn states(&self) -> &[P::State] {
        &self.states
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Messages sent so far.
    pub fn messages(&self) -> u64 {
        self.messages
    }

    pub fn in_flight(&self) -> usize {
        self.in_flight
    }

    pub fn is_woken(&self, v: usize) -> bool {
        self.woken[v]
    }

    /// Number of queued messages on the channel of arc `a`.
    pub fn channel_len(&self, a: usize) -> usize {
        self.channels[a].len()
    }

    /// Digest of the head message on the channel of arc `a`.
    pub fn head_digest(&self, a: usize) -> Option<&str> {
        self.channels[a].front().map(|e| e.digest.as_str())
    }

    /// Pending wakeups in vertex order, then deliveries in arc order.
    pub fn enabled(&self) -> Vec<Event> {
        let mut ev: Vec<Event> = (0..self.net.n()).filter(|&v| !self.woken[v]).map(Event::Wakeup).collect();
        ev.extend((0..self.channels.len()).filter(|&a| !self.channels[a].is_empty()).map(Event::Deliver));
        ev
    }

    /// No pending wakeups and no message in flight.
    pub fn is_quiescent(&self) -> bool {
        self.in_flight == 0 && self.woken.iter().all(|&w| w)
    }

    pub fn execute(&mut self, ev: Event) -> Result<()> {
        let step = self.steps;
        let mut out = Outbox::new();
        let v = match ev {
            Event::Wakeup(v) => {
                if v >= self.net.n() || self.woken[v] {
                    return Err(Error::Simulation(format!("wakeup of process {v} is not enabled")));
                }
                self.woken[v] = true;
                self.trace.push(TraceEvent { step, kind: EventKind::Wakeup, vertex: v, port: None, digest: None });
                self.proto.on_wakeup(&mut self.states[v], &mut out);
                v
            }
            Event::Deliver(a) => {
                let env = self
                    .channels
                    .get_mut(a)
                    .and_then(VecDeque::pop_front)
                    .ok_or_else(|| Error::Simulation(format!("channel of arc {a} is empty")))?;
                self.in_flight -= 1;
                let v = self.net.digraph().arc(a).t;
                let port = self.net.inport(a);
                self.trace.push(TraceEvent { step, kind: EventKind::Deliver, vertex: v, port: Some(port), digest: Some(env.digest) });
                self.proto.on_receive(&mut self.states[v], port, &env.msg, &mut out);
                v
            }
        };
        for (port, msg) in out.sends {
            let a = self
                .net
                .arc_at(v, port)
                .ok_or_else(|| Error::Protocol(format!("process {v} sent on port {port} but has degree {}", self.net.degree(v))))?;
            let digest = digest_payload(&msg)?;
            self.trace.push(TraceEvent { step, kind: EventKind::Send, vertex: v, port: Some(port), digest: Some(digest.clone()) });
            self.channels[a].push_back(Envelope { msg, digest });
            self.in_flight += 1;
            self.messages += 1;
        }
        if !self.halted[v] && self.proto.is_halted(&self.states[v]) {
            self.halted[v] = true;
            self.trace.push(TraceEvent { step, kind: EventKind::Halt, vertex: v, port: None, digest: None });
        }
        self.steps += 1;
        Ok(())
    }

    pub fn into_states(self) -> Vec<P::State> {
        self.states
    }

    fn finish(self, status: RunStatus) -> RunResult<P::State> {
        RunResult { status, steps: self.steps, messages: self.messages, trace: self.trace, states: self.states }
    }
}
