use std::collections::BTreeSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graphs::SymDigraph;
use crate::lifts::{canonical_form, default_tree, involutions, permutations, reidemeister_lift, PermAssignment};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LiftFilter {
    pub simple: bool,
    pub connected: bool,
}

impl LiftFilter {
    pub const SIMPLE_CONNECTED: LiftFilter = LiftFilter { simple: true, connected: true };

    fn accepts(&self, d: &SymDigraph) -> bool {
        (!self.simple || d.is_simple()) && (!self.connected || d.is_connected())
    }
}

/// One isomorphism class of lifts, with the first assignment producing it.
#[derive(Clone, Debug)]
pub struct Lift {
    pub total: SymDigraph,
    pub assignment: PermAssignment,
}

#[derive(Clone, Debug)]
pub struct LiftEnumeration {
    pub lifts: Vec<Lift>,
    pub complete: bool,
    pub assignments_tried: u64,
}

/// Every `q`-sheeted symmetric covering of `base` passing `filter`, up to
/// isomorphism. Assignments over the spanning tree `tree` (breadth-first by
/// default) are visited in lexicographic order of the cotree permutations,
/// lowest arc first, and each class is represented by its first assignment.
pub fn enumerate_lifts(
    base: &SymDigraph,
    q: usize,
    filter: LiftFilter,
    tree: Option<&[usize]>,
    budget: &mut Budget,
) -> Result<LiftEnumeration> {
    if q == 0 {
        return Err(Error::InvalidAssignment("q must be at least 1".into()));
    }
    if !base.is_connected() {
        return Err(Error::InvalidGraph("base must be connected".into()));
    }
    let tree: Vec<usize> = match tree {
        Some(t) => t.to_vec(),
        None => default_tree(base),
    };
    let probe = PermAssignment::new(base, q, tree.iter().copied(), [])?;
    let cotree: Vec<usize> =
        (0..base.arc_count()).filter(|&a| base.sym(a) >= a && !probe.tree().contains(&a)).collect();
    let perms = permutations(q);
    let invs = involutions(q);
    let choices: Vec<&Vec<Vec<usize>>> =
        cotree.iter().map(|&a| if base.is_self_symmetric(a) { &invs } else { &perms }).collect();

    let mut seen = BTreeSet::new();
    let mut lifts = Vec::new();
    let mut tried = 0u64;
    let mut idx = vec![0usize; cotree.len()];
    loop {
        if budget.tick().is_err() {
            return Ok(LiftEnumeration { lifts, complete: false, assignments_tried: tried });
        }
        tried += 1;
        let sigma = cotree.iter().zip(&idx).zip(&choices).map(|((&a, &i), c)| (a, c[i].clone()));
        let pa = PermAssignment::new(base, q, tree.iter().copied(), sigma)?;
        let cover = reidemeister_lift(base, &pa)?;
        if filter.accepts(cover.total()) {
            let key = canonical_form(cover.total()).certificate().to_vec();
            if seen.insert(key) {
                lifts.push(Lift { total: cover.total().clone(), assignment: pa });
            }
        }
        // odometer, last cotree arc fastest
        let mut j = idx.len();
        loop {
            if j == 0 {
                return Ok(LiftEnumeration { lifts, complete: true, assignments_tried: tried });
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < choices[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

#[derive(Clone, Debug)]
pub enum UniqueLift {
    Unique(Box<Lift>),
    /// Zero, or two or more, simple connected classes; carries the classes found.
    NotUnique(Vec<Lift>),
    Unknown,
}

impl UniqueLift {
    pub fn lift(&self) -> Option<&Lift> {
        match self {
            UniqueLift::Unique(l) => Some(l),
            _ => None,
        }
    }
}

/// The unique simple connected `q`-sheeted lift of `base`, if exactly one
/// isomorphism class exists.
pub fn unique_simple_connected_lift(base: &SymDigraph, q: usize, budget: &mut Budget) -> Result<UniqueLift> {
    let e = enumerate_lifts(base, q, LiftFilter::SIMPLE_CONNECTED, None, budget)?;
    if !e.complete {
        return Ok(UniqueLift::Unknown);
    }
    let mut lifts = e.lifts;
    if lifts.len() == 1 {
        Ok(UniqueLift::Unique(Box::new(lifts.pop().expect("one"))))
    } else {
        Ok(UniqueLift::NotUnique(lifts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::builtin;
    use crate::lifts::is_isomorphic;

    fn d(name: &str) -> SymDigraph {
        builtin(name).unwrap().to_digraph()
    }

    #[test]
    fn g1_two_sheets_unique() {
        let mut b = Budget::unlimited();
        let u = unique_simple_connected_lift(&d("h-g1"), 2, &mut b).unwrap();
        assert!(is_isomorphic(&u.lift().unwrap().total, &d("h-g4")).is_some());
    }

    #[test]
    fn g1_four_sheets_ambiguous() {
        let mut b = Budget::unlimited();
        let e = enumerate_lifts(&d("h-g1"), 4, LiftFilter::SIMPLE_CONNECTED, None, &mut b).unwrap();
        assert!(e.lifts.len() >= 3);
        for g in ["h-g5", "h-g6", "h-g7"] {
            assert!(e.lifts.iter().any(|l| is_isomorphic(&l.total, &d(g)).is_some()), "{g}");
        }
    }

    #[test]
    fn budget_marks_incomplete() {
        let mut b = Budget::new(5);
        let e = enumerate_lifts(&d("h-g1"), 4, LiftFilter::default(), None, &mut b).unwrap();
        assert!(!e.complete);
    }
}
