//! Leader or co-leader election on trees.
//!
//! A process waits for tokens from all but one neighbour, then sends a token
//! to the remaining one. A process that has heard from every neighbour when
//! it decides becomes the leader; two processes whose tokens cross on an edge
//! become co-leaders. Tokens delivered before a process wakes are buffered.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{Network, Outbox, Protocol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "port")]
pub enum ElectionStatus {
    Idle,
    /// Token sent through this port, waiting.
    Sent(usize),
    Leader,
    /// Co-leader; the partner is behind this port.
    CoLeader(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElectionState {
    pub rec: Vec<bool>,
    pub woken: bool,
    pub status: ElectionStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElectionMsg {
    Tok,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TreeElection;

fn decide(s: &mut ElectionState, out: &mut Outbox<ElectionMsg>) {
    if !s.woken || s.status != ElectionStatus::Idle {
        return;
    }
    let mut missing = (0..s.rec.len()).filter(|&i| !s.rec[i]);
    match (missing.next(), missing.next()) {
        (None, _) => s.status = ElectionStatus::Leader,
        (Some(i), None) => {
            out.send(i + 1, ElectionMsg::Tok);
            s.status = ElectionStatus::Sent(i + 1);
        }
        _ => {}
    }
}

impl Protocol for TreeElection {
    type Input = ();
    type State = ElectionState;
    type Msg = ElectionMsg;

    fn init(&self, degree: usize, _: &()) -> ElectionState {
        ElectionState { rec: vec![false; degree], woken: false, status: ElectionStatus::Idle }
    }

    fn on_wakeup(&self, s: &mut ElectionState, out: &mut Outbox<ElectionMsg>) {
        s.woken = true;
        decide(s, out);
    }

    fn on_receive(&self, s: &mut ElectionState, port: usize, _: &ElectionMsg, out: &mut Outbox<ElectionMsg>) {
        s.rec[port - 1] = true;
        match s.status {
            ElectionStatus::Sent(p) if p == port => s.status = ElectionStatus::CoLeader(p),
            ElectionStatus::Idle => decide(s, out),
            _ => {}
        }
    }

    fn is_halted(&self, s: &ElectionState) -> bool {
        matches!(s.status, ElectionStatus::Leader | ElectionStatus::CoLeader(_))
    }
}

/// Who was elected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Elected {
    Leader { vertex: usize },
    CoLeaders { vertices: [usize; 2], ports: [usize; 2] },
}

/// Checks that a final configuration has exactly one leader and no
/// co-leader, or exactly two co-leaders that point at each other.
pub fn elected(net: &Network, states: &[ElectionState]) -> Result<Elected> {
    let leaders: Vec<usize> = (0..states.len()).filter(|&v| states[v].status == ElectionStatus::Leader).collect();
    let co: Vec<(usize, usize)> = (0..states.len())
        .filter_map(|v| match states[v].status {
            ElectionStatus::CoLeader(p) => Some((v, p)),
            _ => None,
        })
        .collect();
    match (leaders.as_slice(), co.as_slice()) {
        ([l], []) => Ok(Elected::Leader { vertex: *l }),
        ([], [(u, p), (v, q)]) => {
            let d = net.digraph();
            let a = net.arc_at(*u, *p).expect("valid port");
            if d.arc(a).t != *v || d.outport(d.sym(a)) != Some(*q) {
                return Err(Error::Protocol(format!("co-leaders {u} and {v} do not share an edge")));
            }
            Ok(Elected::CoLeaders { vertices: [*u, *v], ports: [*p, *q] })
        }
        _ => Err(Error::Protocol(format!("{} leaders and {} co-leaders", leaders.len(), co.len()))),
    }
}
