use std::collections::BTreeMap;

use crate::budget::{Budget, Exhausted};
use crate::coverings::coarsest_equitable_partition;
use crate::graphs::{dir, UGraph};
use crate::lifts::is_isomorphic;

#[derive(Clone, Debug)]
pub struct YkOutcome {
    /// `Some(true)` when the condition holds, `None` when the search ran out of budget.
    pub holds: Option<bool>,
    /// A connected graph of the same order, not isomorphic to `g`, with the
    /// same degree refinement (hence a common finite covering with `g`).
    pub witness: Option<UGraph>,
}

/// The sufficient condition holds when no other connected graph with the
/// same number of vertices shares `g`'s degree refinement.
///
/// Candidates are built directly from the refinement: vertex classes of the
/// same sizes, each vertex of class `i` getting exactly `c_ij` neighbours in
/// class `j`. Any such graph has the same degree refinement as `g`, and
/// every graph with that refinement arises this way.
pub fn yk_sufficient_condition(g: &UGraph, budget: &mut Budget) -> YkOutcome {
    let d = dir(g, None);
    let color = coarsest_equitable_partition(&d);
    let k = color.iter().max().map_or(0, |c| c + 1);
    let mut sizes = vec![0usize; k];
    for &c in &color {
        sizes[c] += 1;
    }
    let mut need = vec![vec![0usize; k]; k];
    let mut filled = vec![false; k];
    for v in 0..g.n() {
        if !filled[color[v]] {
            filled[color[v]] = true;
            for &w in g.neighbors(v) {
                need[color[v]][color[w]] += 1;
            }
        }
    }
    let mut class_of = Vec::with_capacity(g.n());
    for (c, &s) in sizes.iter().enumerate() {
        class_of.extend(std::iter::repeat_n(c, s));
    }
    let mut gen = Realizer {
        g,
        n: g.n(),
        class_of,
        need,
        cnt: vec![vec![0; k]; g.n()],
        adj: vec![Vec::new(); g.n()],
        witness: None,
    };
    match gen.fill(0, budget) {
        Ok(()) => YkOutcome { holds: Some(gen.witness.is_none()), witness: gen.witness },
        Err(Exhausted) => YkOutcome { holds: None, witness: None },
    }
}

struct Realizer<'a> {
    g: &'a UGraph,
    n: usize,
    class_of: Vec<usize>,
    need: Vec<Vec<usize>>,
    cnt: Vec<Vec<usize>>,
    adj: Vec<Vec<usize>>,
    witness: Option<UGraph>,
}

impl Realizer<'_> {
    fn fill(&mut self, v: usize, budget: &mut Budget) -> Result<(), Exhausted> {
        budget.tick()?;
        if self.witness.is_some() {
            return Ok(());
        }
        if v == self.n {
            let edges: Vec<(usize, usize)> =
                (0..self.n).flat_map(|u| self.adj[u].iter().filter(move |&&w| w > u).map(move |&w| (u, w))).collect();
            if let Ok(h) = UGraph::new(self.n, edges) {
                if is_isomorphic(&dir(&h, None), &dir(self.g, None)).is_none() {
                    self.witness = Some(h);
                }
            }
            return Ok(());
        }
        let cv = self.class_of[v];
        // per target class: how many more neighbours among later vertices
        let mut picks: BTreeMap<usize, usize> = BTreeMap::new();
        for (j, &want) in self.need[cv].iter().enumerate() {
            let have = self.cnt[v][j];
            if have > want {
                return Ok(());
            }
            if want > have {
                picks.insert(j, want - have);
            }
        }
        let plan: Vec<(usize, usize)> = picks.into_iter().collect();
        let mut chosen = Vec::new();
        self.per_class(v, &plan, 0, &mut chosen, budget)
    }

    fn per_class(&mut self, v: usize, plan: &[(usize, usize)], i: usize, chosen: &mut Vec<usize>, budget: &mut Budget) -> Result<(), Exhausted> {
        if i == plan.len() {
            let cv = self.class_of[v];
            for &w in chosen.iter() {
                self.adj[v].push(w);
                self.adj[w].push(v);
                self.cnt[v][self.class_of[w]] += 1;
                self.cnt[w][cv] += 1;
            }
            self.fill(v + 1, budget)?;
            for &w in chosen.iter() {
                self.adj[v].pop();
                self.adj[w].pop();
                self.cnt[v][self.class_of[w]] -= 1;
                self.cnt[w][cv] -= 1;
            }
            return Ok(());
        }
        let (j, t) = plan[i];
        let cv = self.class_of[v];
        let open: Vec<usize> = (v + 1..self.n).filter(|&w| self.class_of[w] == j && self.cnt[w][cv] < self.need[j][cv]).collect();
        let touched: Vec<usize> = open.iter().copied().filter(|&w| !self.adj[w].is_empty()).collect();
        let fresh: Vec<usize> = open.iter().copied().filter(|&w| self.adj[w].is_empty()).collect();
        for from_fresh in 0..=t.min(fresh.len()) {
            let rest = t - from_fresh;
            if rest > touched.len() {
                continue;
            }
            let base_len = chosen.len();
            chosen.extend_from_slice(&fresh[..from_fresh]);
            self.combos(v, plan, i, &touched, rest, 0, chosen, budget)?;
            chosen.truncate(base_len);
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn combos(
        &mut self,
        v: usize,
        plan: &[(usize, usize)],
        i: usize,
        pool: &[usize],
        t: usize,
        from: usize,
        chosen: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<(), Exhausted> {
        if t == 0 {
            return self.per_class(v, plan, i + 1, chosen, budget);
        }
        for x in from..pool.len() {
            if pool.len() - x < t {
                break;
            }
            chosen.push(pool[x]);
            self.combos(v, plan, i, pool, t - 1, x + 1, chosen, budget)?;
            chosen.pop();
            if self.witness.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::builtin;

    fn g(name: &str) -> UGraph {
        builtin(name).unwrap().ugraph().unwrap().clone()
    }

    #[test]
    fn unique_small_graphs_hold() {
        let mut b = Budget::unlimited();
        for name in ["k2", "c6", "k4", "p3"] {
            assert_eq!(yk_sufficient_condition(&g(name), &mut b).holds, Some(true), "{name}");
        }
    }

    #[test]
    fn prism_and_k33_share_refinement() {
        let mut b = Budget::unlimited();
        let out = yk_sufficient_condition(&g("prism"), &mut b);
        assert_eq!(out.holds, Some(false));
        let w = out.witness.unwrap();
        assert_eq!(w.regular_degree(), Some(3));
    }
}
