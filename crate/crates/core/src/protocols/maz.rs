//! Mazurkiewicz's enumeration algorithm.
//!
//! Each process holds a number, a local view (one triple per port pair) and
//! a mailbox of every `(number, view)` pair it has heard of. Mailboxes travel
//! whole. At quiescence the mailbox encodes a quotient of the ported network.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Arc, SymDigraph};
use crate::simulator::{Network, Outbox, Protocol};

/// `(m, p, q)`: the neighbour behind my port `q` has number `m` and reaches
/// me through its port `p`.
pub type Triple = (u32, u32, u32);
pub type View = BTreeSet<Triple>;
pub type Mailbox = BTreeSet<(u32, View)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MazState {
    pub degree: usize,
    pub n: u32,
    pub view: View,
    pub mailbox: Mailbox,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MazMessage {
    pub m: u32,
    pub n_old: u32,
    pub mailbox: Mailbox,
    /// Sender's port toward the receiver.
    pub port: u32,
}

/// Compares views by the maximum of their symmetric difference: `a < b`
/// when that maximum lies in `b`.
pub fn view_order_cmp(a: &View, b: &View) -> Ordering {
    let mut x = a.iter().rev().peekable();
    let mut y = b.iter().rev().peekable();
    loop {
        match (x.peek(), y.peek()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(s), Some(t)) => match s.cmp(t) {
                Ordering::Equal => {
                    x.next();
                    y.next();
                }
                o => return o,
            },
        }
    }
}

fn max_number(mb: &Mailbox) -> u32 {
    mb.iter().map(|(m, _)| *m).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Mazurkiewicz;

impl Mazurkiewicz {
    fn broadcast(state: &MazState, n_old: u32, out: &mut Outbox<MazMessage>) {
        for p in 1..=state.degree {
            out.send(p, MazMessage { m: state.n, n_old, mailbox: state.mailbox.clone(), port: p as u32 });
        }
    }
}

impl Protocol for Mazurkiewicz {
    type Input = ();
    type State = MazState;
    type Msg = MazMessage;

    fn init(&self, degree: usize, _: &()) -> MazState {
        MazState { degree, n: 0, view: View::new(), mailbox: Mailbox::new() }
    }

    fn on_wakeup(&self, s: &mut MazState, out: &mut Outbox<MazMessage>) {
        if s.n != 0 || !s.mailbox.is_empty() {
            return;
        }
        s.n = 1;
        s.mailbox.insert((1, View::new()));
        Self::broadcast(s, 0, out);
    }

    fn on_receive(&self, s: &mut MazState, q: usize, msg: &MazMessage, out: &mut Outbox<MazMessage>) {
        let before = s.mailbox.len();
        let n_old = s.n;
        s.mailbox.extend(msg.mailbox.iter().cloned());
        let beaten = s.mailbox.iter().any(|(m, v)| *m == s.n && view_order_cmp(&s.view, v) == Ordering::Less);
        if s.n == 0 || beaten {
            s.n = 1 + max_number(&s.mailbox);
        }
        let q = q as u32;
        s.view.remove(&(msg.n_old, msg.port, q));
        s.view.insert((msg.m, msg.port, q));
        s.mailbox.insert((s.n, s.view.clone()));
        if s.mailbox.len() != before {
            Self::broadcast(s, n_old, out);
        }
    }
}

/// The quotient a process reconstructs from its final mailbox.
#[derive(Clone, Debug, Serialize)]
pub struct MazQuotient {
    /// Vertex `i - 1` stands for number `i`; outports come from the views.
    pub graph: SymDigraph,
    pub k: usize,
    /// The process's own number.
    pub id: u32,
}

/// The ≺-maximal stored view for each number `1..=k`.
fn maximal_views(mb: &Mailbox) -> Result<Vec<&View>> {
    let k = max_number(mb) as usize;
    let mut best: Vec<Option<&View>> = vec![None; k];
    for (m, v) in mb {
        if *m == 0 {
            return Err(Error::Protocol("mailbox holds number 0".into()));
        }
        let slot = &mut best[*m as usize - 1];
        if slot.is_none_or(|b| view_order_cmp(b, v) == Ordering::Less) {
            *slot = Some(v);
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Protocol(format!("mailbox has no view for number {}", i + 1))))
        .collect()
}

pub fn build_quotient_from_mailbox(state: &MazState) -> Result<MazQuotient> {
    let views = maximal_views(&state.mailbox)?;
    let k = views.len();
    if state.n == 0 || state.n as usize > k {
        return Err(Error::Protocol(format!("own number {} outside 1..={k}", state.n)));
    }
    // Arc (i, m, p, q): i -> m leaving i by q, entering m by p.
    let mut arcs = Vec::new();
    for (i, view) in views.iter().enumerate() {
        for &(m, p, q) in view.iter() {
            if m == 0 || m as usize > k {
                return Err(Error::Protocol(format!("view of {} names number {m}", i + 1)));
            }
            arcs.push((i as u32 + 1, m, p, q));
        }
    }
    let index: std::collections::HashMap<_, _> = arcs.iter().enumerate().map(|(a, &t)| (t, a)).collect();
    let mut sym = Vec::with_capacity(arcs.len());
    for &(i, m, p, q) in &arcs {
        let back = index
            .get(&(m, i, q, p))
            .ok_or_else(|| Error::Protocol(format!("view of {i} has ({m},{p},{q}) without its reverse in the view of {m}")))?;
        sym.push(*back);
    }
    let outports = arcs.iter().map(|&(_, _, _, q)| q as usize).collect();
    let darcs = arcs.iter().map(|&(i, m, _, _)| Arc { s: i as usize - 1, t: m as usize - 1 }).collect();
    let graph = SymDigraph::new(k, darcs, sym, Some(outports))?;
    Ok(MazQuotient { graph, k, id: state.n })
}

/// Checks the five end-of-run properties of the algorithm on a quiescent run.
/// Returns one message per violated property.
pub fn check_lemma_fundamental(net: &Network, states: &[MazState]) -> Vec<String> {
    let mut bad = Vec::new();
    let n = net.n();
    let mut used: Vec<u32> = states.iter().map(|s| s.n).collect();
    used.sort_unstable();
    used.dedup();
    let k = used.len();
    if used.first() != Some(&1) || used.last().copied() != Some(k as u32) || k > n {
        bad.push(format!("1: numbers {used:?} are not 1..=k with k <= {n}"));
    }
    if states.windows(2).any(|w| w[0].mailbox != w[1].mailbox) {
        bad.push("2: final mailboxes differ".into());
    }
    for (v, s) in states.iter().enumerate() {
        if let Some(w) = states.iter().position(|t| !t.mailbox.contains(&(s.n, s.view.clone()))) {
            bad.push(format!("3: ({}, N({v})) missing from the mailbox of {w}", s.n));
            break;
        }
    }
    'four: for v in 0..n {
        for w in v + 1..n {
            if states[v].n == states[w].n && states[v].view != states[w].view {
                bad.push(format!("4: {v} and {w} share number {} with different views", states[v].n));
                break 'four;
            }
        }
    }
    let d = net.digraph();
    for (v, s) in states.iter().enumerate() {
        let expect: View = d
            .out_arcs(v)
            .iter()
            .map(|&a| (states[d.arc(a).t].n, net.inport(a) as u32, d.outport(a).expect("ported") as u32))
            .collect();
        if s.view != expect {
            bad.push(format!("5: view of {v} is {:?}, neighbourhood gives {expect:?}", s.view));
            break;
        }
    }
    bad
}

/// Message count against the `4 m² n` envelope (`m` edges, `n` vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MessageBound {
    pub messages: u64,
    pub envelope: u64,
    pub within: bool,
}

pub fn message_bound(net: &Network, messages: u64) -> MessageBound {
    let m = net.digraph().arc_count() as u64 / 2;
    let envelope = 4 * m * m * net.n() as u64;
    MessageBound { messages, envelope, within: messages <= envelope }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ts: &[Triple]) -> View {
        ts.iter().copied().collect()
    }

    #[test]
    fn view_order() {
        assert_eq!(view_order_cmp(&v(&[]), &v(&[(1, 1, 1)])), Ordering::Less);
        assert_eq!(view_order_cmp(&v(&[(1, 1, 1)]), &v(&[(1, 1, 1)])), Ordering::Equal);
        assert_eq!(view_order_cmp(&v(&[(1, 1, 1), (3, 2, 2)]), &v(&[(2, 1, 1), (3, 2, 2)])), Ordering::Less);
        assert_eq!(view_order_cmp(&v(&[(3, 1, 1)]), &v(&[(1, 1, 1), (2, 1, 1)])), Ordering::Greater);
    }

    #[test]
    fn wakeup_after_delivery_is_noop() {
        let p = Mazurkiewicz;
        let mut s = p.init(2, &());
        let mut out = Outbox::new();
        let msg = MazMessage { m: 1, n_old: 0, mailbox: [(1, View::new())].into_iter().collect(), port: 1 };
        p.on_receive(&mut s, 1, &msg, &mut out);
        assert_eq!(s.n, 2);
        assert_eq!(s.view, v(&[(1, 1, 1)]));
        assert_eq!(out.len(), 2);
        let mut out = Outbox::new();
        let before = s.clone();
        p.on_wakeup(&mut s, &mut out);
        assert!(out.is_empty());
        assert_eq!(s, before);
        p.on_receive(&mut s, 1, &msg, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn isolated_wakeup_sends_on_every_port() {
        let p = Mazurkiewicz;
        let mut s = p.init(2, &());
        let mut out = Outbox::new();
        p.on_wakeup(&mut s, &mut out);
        assert_eq!(s.n, 1);
        assert_eq!(out.len(), 2);
    }
}
