//! Morphisms between symmetric digraphs, fibre partitions and base search.

mod bases;
pub mod matching;
mod morphism;
mod oracle;
mod partition;

pub use bases::{
    enumerate_bases, fibre_forest_check, is_minimal, is_minimal_ported, port_refinement, ported_quotient,
    sheet_counts, BaseEnumeration, BaseSearch, Minimality,
};
pub use morphism::{classify_morphism, sheets_of, CoveringMap, Failure, MorphismReport};
pub use oracle::{all_bases_oracle, brute_force_base_oracle, ORACLE_MAX_N};
pub(crate) use partition::refine as partition_refine;
pub use partition::{
    coarsest_equitable_partition, equitable_partitions, partition_bases, partition_to_base, FibrePartition,
    Obstruction, QuotientOutcome,
};
