//! Distributed algorithms for anonymous networks, written as event handlers
//! for the [`simulator`](crate::simulator).

mod composite;
mod election;
mod maz;
mod tarry;

use serde::{Deserialize, Serialize};

pub use composite::{
    composite_role, spanning_tree_composite, topology_composite, SpanningTreeOutcome, SpanningTreeRun, TopologyOutcome,
    TopologyRun,
};
pub use election::{elected, Elected, ElectionMsg, ElectionState, ElectionStatus, TreeElection};
pub use maz::{
    build_quotient_from_mailbox, check_lemma_fundamental, message_bound, view_order_cmp, Mailbox, MazMessage, MazQuotient,
    MazState, Mazurkiewicz, MessageBound, Triple, View,
};
pub use tarry::{is_spanning_tree, tree_edges, Tarry, TarryMsg, TarryRole, TarryState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolId {
    Mazurkiewicz,
    ElectionTree,
    Tarry,
    SpanningTree,
    Topology,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 5] =
        [ProtocolId::Mazurkiewicz, ProtocolId::ElectionTree, ProtocolId::Tarry, ProtocolId::SpanningTree, ProtocolId::Topology];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::Mazurkiewicz => "mazurkiewicz",
            ProtocolId::ElectionTree => "election-tree",
            ProtocolId::Tarry => "tarry",
            ProtocolId::SpanningTree => "spanning-tree",
            ProtocolId::Topology => "topology",
        }
    }

    pub fn parse(s: &str) -> Option<ProtocolId> {
        ProtocolId::ALL.into_iter().find(|p| p.name() == s)
    }
}
