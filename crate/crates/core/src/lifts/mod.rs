//! Reidemeister lifts, their enumeration, and isomorphism of symmetric digraphs.

mod assign;
mod canonical;
mod enumerate;

pub use assign::{default_tree, involutions, parse_cycles, permutations, reidemeister_lift, PermAssignment};
pub use canonical::{canonical_form, is_isomorphic, CanonicalForm, Isomorphism, ISO_MAX_N};
pub use enumerate::{enumerate_lifts, unique_simple_connected_lift, Lift, LiftEnumeration, LiftFilter, UniqueLift};
