//! Two-phase algorithms: enumeration to quiescence, then a local decision on
//! the reconstructed quotient.

use std::collections::BTreeMap;

use serde::Serialize;

use super::maz::{build_quotient_from_mailbox, Mailbox, MazQuotient, MazState, Mazurkiewicz};
use super::tarry::{is_spanning_tree, tree_edges, Tarry, TarryRole, TarryState};
use crate::error::{Error, Result};
use crate::graphs::SymDigraph;
use crate::lifts::{unique_simple_connected_lift, UniqueLift};
use crate::simulator::{run, Network, RunResult, RunStatus, SimConfig};
use crate::Budget;

fn enumerate(net: &Network, cfg: &SimConfig) -> Result<(RunResult<MazState>, Vec<MazQuotient>)> {
    let maz = run(net, &Mazurkiewicz, &vec![(); net.n()], cfg)?;
    if maz.status != RunStatus::Quiescent {
        return Err(Error::Simulation(format!("enumeration stopped after {} steps without quiescence", maz.steps)));
    }
    let quotients = maz.states.iter().map(build_quotient_from_mailbox).collect::<Result<Vec<_>>>()?;
    Ok((maz, quotients))
}

/// The role a process takes from its own state and quotient, knowing `n`.
pub fn composite_role(state: &MazState, quotient: &MazQuotient, n: usize) -> std::result::Result<TarryRole, String> {
    let k = quotient.k;
    if k == n {
        return Ok(if state.n == 1 { TarryRole::Leader } else { TarryRole::Follower });
    }
    if 2 * k != n {
        return Err(format!("quotient has {k} vertices; neither {n} nor {}", n as f64 / 2.0));
    }
    let g = &quotient.graph;
    let i = (0..k)
        .find(|&v| g.out_arcs(v).iter().any(|&a| g.is_loop(a)))
        .ok_or_else(|| "quotient has half the vertices but no loop".to_string())? as u32
        + 1;
    if state.n != i {
        return Ok(TarryRole::Follower);
    }
    state
        .view
        .iter()
        .find(|t| t.0 == i)
        .map(|t| TarryRole::CoLeader(t.2 as usize))
        .ok_or_else(|| format!("process numbered {i} sees no neighbour with its own number"))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SpanningTreeOutcome {
    Tree { k: usize, roles: Vec<TarryRole>, edges: Vec<(usize, usize)>, valid: bool, terminated: bool },
    Infeasible { k: usize, n: usize, reason: String },
}

#[derive(Clone, Debug)]
pub struct SpanningTreeRun {
    pub maz: RunResult<MazState>,
    pub tarry: Option<RunResult<TarryState>>,
    pub outcome: SpanningTreeOutcome,
}

/// Enumeration, then leader or co-leader selection, then token flooding.
/// Both phases use `cfg`.
pub fn spanning_tree_composite(net: &Network, cfg: &SimConfig) -> Result<SpanningTreeRun> {
    let (maz, quotients) = enumerate(net, cfg)?;
    let n = net.n();
    let k = quotients.iter().map(|q| q.k).max().unwrap_or(0);
    let mut roles = Vec::with_capacity(n);
    for (s, q) in maz.states.iter().zip(&quotients) {
        match composite_role(s, q, n) {
            Ok(r) => roles.push(r),
            Err(reason) => {
                return Ok(SpanningTreeRun { maz, tarry: None, outcome: SpanningTreeOutcome::Infeasible { k, n, reason } });
            }
        }
    }
    let tarry = run(net, &Tarry, &roles, cfg)?;
    if tarry.status != RunStatus::Quiescent {
        return Err(Error::Simulation(format!("traversal stopped after {} steps without quiescence", tarry.steps)));
    }
    let edges = tree_edges(net, &tarry.states)?;
    let valid = is_spanning_tree(n, &edges);
    let terminated = tarry.states.iter().all(|s| s.done);
    Ok(SpanningTreeRun { maz, tarry: Some(tarry), outcome: SpanningTreeOutcome::Tree { k, roles, edges, valid, terminated } })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TopologyOutcome {
    Recognized { k: usize, q: usize, graph: SymDigraph },
    /// Zero, or two or more, non-isomorphic simple connected lifts.
    Ambiguous { k: usize, q: usize, classes: Vec<SymDigraph> },
    Unknown { k: usize, q: usize },
    Indivisible { k: usize, n: usize },
}

#[derive(Clone, Debug)]
pub struct TopologyRun {
    pub maz: RunResult<MazState>,
    /// Distinct local outcomes, one per distinct final mailbox.
    pub outcomes: Vec<TopologyOutcome>,
    /// Index into `outcomes` for each process.
    pub vertex_outcome: Vec<usize>,
}

impl TopologyRun {
    /// The common outcome when every process ended with the same mailbox.
    pub fn outcome(&self) -> Option<&TopologyOutcome> {
        (self.outcomes.len() == 1).then(|| &self.outcomes[0])
    }
}

/// Enumeration, then each process lifts its quotient to `n` vertices and
/// keeps the lift if it is the only simple connected one up to isomorphism.
/// Processes with identical mailboxes share the computation.
pub fn topology_composite(net: &Network, cfg: &SimConfig, budget: &mut Budget) -> Result<TopologyRun> {
    let (maz, quotients) = enumerate(net, cfg)?;
    let n = net.n();
    let mut cache: BTreeMap<&Mailbox, usize> = BTreeMap::new();
    let mut outcomes = Vec::new();
    let mut vertex_outcome = Vec::with_capacity(n);
    for (s, quo) in maz.states.iter().zip(&quotients) {
        if let Some(&i) = cache.get(&s.mailbox) {
            vertex_outcome.push(i);
            continue;
        }
        let k = quo.k;
        let outcome = if n % k != 0 {
            TopologyOutcome::Indivisible { k, n }
        } else {
            let q = n / k;
            match unique_simple_connected_lift(&quo.graph, q, budget)? {
                UniqueLift::Unique(l) => TopologyOutcome::Recognized { k, q, graph: l.total },
                UniqueLift::NotUnique(ls) => TopologyOutcome::Ambiguous { k, q, classes: ls.into_iter().map(|l| l.total).collect() },
                UniqueLift::Unknown => TopologyOutcome::Unknown { k, q },
            }
        };
        cache.insert(&s.mailbox, outcomes.len());
        vertex_outcome.push(outcomes.len());
        outcomes.push(outcome);
    }
    Ok(TopologyRun { maz, outcomes, vertex_outcome })
}
