//! Coverings of symmetric digraphs, Reidemeister lifts, and a deterministic
//! asynchronous message-passing simulator for anonymous networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`graphs`]: undirected ported graphs, symmetric digraphs, the figure corpus.
//! * [`coverings`]: morphism classification, fibre partitions, base enumeration.
//! * [`lifts`]: Reidemeister lifts, lift enumeration, canonical forms.
//! * [`feasibility`]: verdicts for spanning-tree construction and topology recognition.
//! * [`simulator`]: FIFO event loop, seeded schedulers, lifted lockstep runs, replay.
//! * [`protocols`]: Mazurkiewicz enumeration, tree election, Tarry traversal, composites.

pub mod coverings;
pub mod error;
pub mod feasibility;
pub mod graphs;
pub mod lifts;
pub mod protocols;
pub mod simulator;

mod budget;

pub use budget::{Budget, Exhausted, DEFAULT_BUDGET};
pub use coverings::{classify_morphism, sheets_of, CoveringMap, FibrePartition, MorphismReport};
pub use error::{Error, Result};
pub use graphs::{dir, GraphDoc, PortNumbering, SymDigraph, UGraph};
pub use lifts::{is_isomorphic, reidemeister_lift, PermAssignment};
