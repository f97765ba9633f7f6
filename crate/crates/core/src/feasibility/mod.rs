//! Feasibility verdicts for spanning-tree construction and topology
//! recognition, the Yamashita–Kameda sufficient condition, and the search for
//! minimal regular pairs sharing a common finite covering.

mod counterexample;
mod yk;

use serde::Serialize;
use serde_json::{json, Value};

pub use counterexample::{base_sizes, counterexample_search, verify_pair, CounterexampleReport, PairVerification, SizeReport};
pub use yk::{yk_sufficient_condition, YkOutcome};

use crate::budget::Budget;
use crate::coverings::{enumerate_bases, BaseEnumeration, BaseSearch, CoveringMap};
use crate::error::{Error, Result};
use crate::graphs::{dir, UGraph};
use crate::lifts::{unique_simple_connected_lift, Lift, UniqueLift};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    #[serde(rename = "minimal")]
    Minimal,
    #[serde(rename = "two-sheet-loop")]
    TwoSheetLoop,
    #[serde(rename = "q>2-cover")]
    LargeCover,
    #[serde(rename = "loopless-2-cover")]
    LooplessTwoCover,
    #[serde(rename = "ambiguous-lifts")]
    AmbiguousLifts,
    #[serde(rename = "unique-lifts")]
    UniqueLifts,
    #[serde(rename = "budget-exhausted")]
    BudgetExhausted,
}

/// Evidence attached to a verdict; each item can be re-checked with the
/// coverings and lifts modules.
#[derive(Clone, Debug)]
pub enum Witness {
    Covering(CoveringMap),
    /// A base of `dir(g)` with two non-isomorphic simple connected `q`-sheeted lifts.
    AmbiguousLifts { base: CoveringMap, first: Lift, second: Lift },
    /// A base whose only simple connected lift at its sheet count is `lift`.
    UniqueLift { base: CoveringMap, lift: Lift },
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub decision: Decision,
    pub reason: Reason,
    pub witnesses: Vec<Witness>,
    /// Sheet counts whose base search ran to completion.
    pub sheets_searched: Vec<usize>,
}

impl Verdict {
    fn unknown(e: &BaseEnumeration) -> Verdict {
        Verdict {
            decision: Decision::Unknown,
            reason: Reason::BudgetExhausted,
            witnesses: Vec::new(),
            sheets_searched: e.sheets_searched.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| match w {
                Witness::Covering(c) => json!({ "kind": "covering", "base": c.base().to_json(), "map": c.to_json() }),
                Witness::AmbiguousLifts { base, first, second } => json!({
                    "kind": "ambiguous-lifts",
                    "base": base.base().to_json(),
                    "map": base.to_json(),
                    "q": base.q(),
                    "lifts": [lift_json(first), lift_json(second)],
                }),
                Witness::UniqueLift { base, lift } => json!({
                    "kind": "unique-lift",
                    "base": base.base().to_json(),
                    "map": base.to_json(),
                    "q": base.q(),
                    "lift": lift_json(lift),
                }),
            })
            .collect();
        json!({
            "decision": self.decision,
            "reason": self.reason,
            "sheets_searched": self.sheets_searched,
            "witnesses": witnesses,
        })
    }
}

fn lift_json(l: &Lift) -> Value {
    json!({ "graph": l.total.to_json(), "assignment": l.assignment.to_json() })
}

/// Whether an anonymous network on `g` (with knowledge of `n`) can build a
/// spanning tree: either `dir(g)` is minimal, or it has no base with more
/// than two sheets and some 2-sheeted base carries a loop.
pub fn spanning_tree_feasible(g: &UGraph, budget: &mut Budget) -> Result<Verdict> {
    let e = enumerate_bases(&dir(g, None), BaseSearch::default(), budget)?;
    if !e.complete {
        return Ok(Verdict::unknown(&e));
    }
    let searched = e.sheets_searched.clone();
    if e.bases.is_empty() {
        return Ok(Verdict { decision: Decision::Feasible, reason: Reason::Minimal, witnesses: Vec::new(), sheets_searched: searched });
    }
    if let Some(c) = e.bases.iter().find(|c| c.q() > 2) {
        return Ok(Verdict {
            decision: Decision::Infeasible,
            reason: Reason::LargeCover,
            witnesses: vec![Witness::Covering(c.clone())],
            sheets_searched: searched,
        });
    }
    if let Some(c) = e.bases.iter().find(|c| c.base().has_loops()) {
        return Ok(Verdict {
            decision: Decision::Feasible,
            reason: Reason::TwoSheetLoop,
            witnesses: vec![Witness::Covering(c.clone())],
            sheets_searched: searched,
        });
    }
    Ok(Verdict {
        decision: Decision::Infeasible,
        reason: Reason::LooplessTwoCover,
        witnesses: e.bases.into_iter().map(Witness::Covering).collect(),
        sheets_searched: searched,
    })
}

/// Whether topology recognition is solvable on `g` (knowing `n`): every
/// base `D` of `dir(g)` with `q` sheets must have exactly one simple
/// connected `q`-sheeted lift.
pub fn topology_recognition_feasible(g: &UGraph, budget: &mut Budget) -> Result<Verdict> {
    let e = enumerate_bases(&dir(g, None), BaseSearch::default(), budget)?;
    if !e.complete {
        return Ok(Verdict::unknown(&e));
    }
    let searched = e.sheets_searched.clone();
    if e.bases.is_empty() {
        return Ok(Verdict { decision: Decision::Feasible, reason: Reason::Minimal, witnesses: Vec::new(), sheets_searched: searched });
    }
    let mut witnesses = Vec::new();
    for c in &e.bases {
        match unique_simple_connected_lift(c.base(), c.q(), budget)? {
            UniqueLift::Unknown => {
                return Ok(Verdict { decision: Decision::Unknown, reason: Reason::BudgetExhausted, witnesses, sheets_searched: searched });
            }
            UniqueLift::NotUnique(lifts) => {
                let mut it = lifts.into_iter();
                let (Some(first), Some(second)) = (it.next(), it.next()) else {
                    return Err(Error::NotCovering(format!("dir(g) is missing from the lifts of a {}-sheeted base", c.q())));
                };
                return Ok(Verdict {
                    decision: Decision::Infeasible,
                    reason: Reason::AmbiguousLifts,
                    witnesses: vec![Witness::AmbiguousLifts { base: c.clone(), first, second }],
                    sheets_searched: searched,
                });
            }
            UniqueLift::Unique(lift) => witnesses.push(Witness::UniqueLift { base: c.clone(), lift: *lift }),
        }
    }
    Ok(Verdict { decision: Decision::Feasible, reason: Reason::UniqueLifts, witnesses, sheets_searched: searched })
}
