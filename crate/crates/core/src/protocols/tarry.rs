//! Spanning-tree construction by token flooding from a leader or from two
//! adjacent co-leaders, with explicit termination by acknowledgments.
//!
//! On its first token a process adopts the sender as parent, answers
//! `InTheTree`, and forwards the token through every other port. Later tokens
//! are answered `AlreadyInTheTree`. Once every forwarded token has been
//! answered and every child has acknowledged, a process acknowledges to its
//! parent. Co-leaders acknowledge each other.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{Network, Outbox, Protocol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "role", content = "port")]
pub enum TarryRole {
    Leader,
    /// Co-leader whose partner is behind this port.
    CoLeader(usize),
    Follower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TarryMsg {
    Token,
    InTheTree,
    AlreadyInTheTree,
    Ack,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TarryState {
    pub degree: usize,
    pub role: TarryRole,
    pub tree: BTreeSet<usize>,
    pub other: BTreeSet<usize>,
    pub parent: Option<usize>,
    pub children: BTreeSet<usize>,
    /// Has owned the token.
    pub token: bool,
    /// Has forwarded its tokens.
    pub started: bool,
    /// Forwarded tokens not yet answered.
    pub pending: usize,
    pub child_acks: usize,
    pub acked: bool,
    pub partner_acked: bool,
    pub done: bool,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Tarry;

impl TarryState {
    fn forward(&mut self, except: Option<usize>, out: &mut Outbox<TarryMsg>) {
        self.started = true;
        for p in 1..=self.degree {
            if Some(p) != except {
                out.send(p, TarryMsg::Token);
                self.pending += 1;
            }
        }
    }

    fn try_ack(&mut self, out: &mut Outbox<TarryMsg>) {
        if self.started && !self.acked && self.pending == 0 && self.child_acks == self.children.len() {
            self.acked = true;
            match self.role {
                TarryRole::Leader => self.done = true,
                TarryRole::CoLeader(p) => out.send(p, TarryMsg::Ack),
                TarryRole::Follower => {
                    out.send(self.parent.expect("followers start on a token"), TarryMsg::Ack);
                    self.done = true;
                }
            }
        }
        if let TarryRole::CoLeader(_) = self.role {
            self.done = self.acked && self.partner_acked;
        }
    }

    fn fail(&mut self, why: String) {
        self.error.get_or_insert(why);
    }
}

impl Protocol for Tarry {
    type Input = TarryRole;
    type State = TarryState;
    type Msg = TarryMsg;

    fn init(&self, degree: usize, role: &TarryRole) -> TarryState {
        let mut tree = BTreeSet::new();
        if let TarryRole::CoLeader(p) = role {
            tree.insert(*p);
        }
        TarryState {
            degree,
            role: *role,
            tree,
            other: BTreeSet::new(),
            parent: None,
            children: BTreeSet::new(),
            token: *role != TarryRole::Follower,
            started: false,
            pending: 0,
            child_acks: 0,
            acked: false,
            partner_acked: false,
            done: false,
            error: None,
        }
    }

    fn on_wakeup(&self, s: &mut TarryState, out: &mut Outbox<TarryMsg>) {
        match s.role {
            TarryRole::Leader => s.forward(None, out),
            TarryRole::CoLeader(p) => s.forward(Some(p), out),
            TarryRole::Follower => return,
        }
        s.try_ack(out);
    }

    fn on_receive(&self, s: &mut TarryState, q: usize, msg: &TarryMsg, out: &mut Outbox<TarryMsg>) {
        match msg {
            TarryMsg::Token if !s.token => {
                s.token = true;
                s.parent = Some(q);
                s.tree.insert(q);
                out.send(q, TarryMsg::InTheTree);
                s.forward(Some(q), out);
            }
            TarryMsg::Token => {
                out.send(q, TarryMsg::AlreadyInTheTree);
                s.other.insert(q);
            }
            TarryMsg::InTheTree | TarryMsg::AlreadyInTheTree => {
                if s.pending == 0 {
                    s.fail(format!("unexpected answer on port {q}"));
                    return;
                }
                s.pending -= 1;
                if *msg == TarryMsg::InTheTree {
                    s.tree.insert(q);
                    s.children.insert(q);
                } else {
                    s.other.insert(q);
                }
            }
            TarryMsg::Ack => {
                if s.children.contains(&q) {
                    s.child_acks += 1;
                } else if s.role == TarryRole::CoLeader(q) {
                    s.partner_acked = true;
                } else {
                    s.fail(format!("acknowledgment from non-child port {q}"));
                }
            }
        }
        s.try_ack(out);
    }

    fn is_halted(&self, s: &TarryState) -> bool {
        s.done
    }
}

/// Edges `{u, v}` (with `u < v`) whose ports are in both `Tree` sets.
pub fn tree_edges(net: &Network, states: &[TarryState]) -> Result<Vec<(usize, usize)>> {
    let d = net.digraph();
    let mut edges = BTreeSet::new();
    for (v, s) in states.iter().enumerate() {
        if let Some(e) = &s.error {
            return Err(Error::Protocol(format!("process {v}: {e}")));
        }
        if s.tree.intersection(&s.other).next().is_some() {
            return Err(Error::Protocol(format!("process {v} has a port in both Tree and other")));
        }
        for &p in &s.tree {
            let a = net.arc_at(v, p).ok_or_else(|| Error::Protocol(format!("process {v} marks port {p}")))?;
            let w = d.arc(a).t;
            let back = d.outport(d.sym(a)).expect("ported");
            if !states[w].tree.contains(&back) {
                return Err(Error::Protocol(format!("edge {{{v},{w}}} is in the tree of {v} only")));
            }
            edges.insert((v.min(w), v.max(w)));
        }
    }
    Ok(edges.into_iter().collect())
}

/// `n - 1` edges forming a connected acyclic graph on `0..n`.
pub fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}
