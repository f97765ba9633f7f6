//! Graph generators: exhaustive small connected graphs, regular graphs, and
//! seeded random graphs and trees.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::{Budget, Exhausted};
use crate::graphs::{dir, UGraph};
use crate::lifts::canonical_form;

fn certificate(g: &UGraph) -> Vec<u64> {
    canonical_form(&dir(g, None)).certificate().to_vec()
}

/// All connected simple graphs on `n` vertices, one per isomorphism class.
/// Exhaustive over edge subsets, so intended for `n <= 7`.
pub fn connected_graphs(n: usize) -> Vec<UGraph> {
    assert!(n <= 7, "exhaustive generation is limited to 7 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        let Ok(g) = UGraph::new(n, edges) else { continue };
        if seen.insert(certificate(&g)) {
            out.push(g);
        }
    }
    out
}

/// Connected `d`-regular simple graphs on `n` vertices, one per isomorphism
/// class. Edges are placed vertex by vertex in increasing order; untouched
/// vertices are interchangeable, so only the lowest ones are ever opened.
pub fn regular_graphs(d: usize, n: usize, budget: &mut Budget) -> Result<Vec<UGraph>, Exhausted> {
    if n == 0 || d >= n || (n * d) % 2 != 0 {
        return Ok(Vec::new());
    }
    let mut g = RegGen { d, n, adj: vec![Vec::new(); n], seen: BTreeSet::new(), out: Vec::new() };
    g.fill(0, budget)?;
    Ok(g.out)
}

struct RegGen {
    d: usize,
    n: usize,
    adj: Vec<Vec<usize>>,
    seen: BTreeSet<Vec<u64>>,
    out: Vec<UGraph>,
}

impl RegGen {
    fn fill(&mut self, v: usize, budget: &mut Budget) -> Result<(), Exhausted> {
        budget.tick()?;
        if v == self.n {
            let edges = (0..self.n).flat_map(|u| self.adj[u].iter().filter(move |&&w| w > u).map(move |&w| (u, w)));
            if let Ok(g) = UGraph::new(self.n, edges.collect::<Vec<_>>()) {
                if self.seen.insert(certificate(&g)) {
                    self.out.push(g);
                }
            }
            return Ok(());
        }
        let need = self.d - self.adj[v].len();
        let touched: Vec<usize> = (v + 1..self.n).filter(|&w| !self.adj[w].is_empty() && self.adj[w].len() < self.d).collect();
        let untouched: Vec<usize> = (v + 1..self.n).filter(|&w| self.adj[w].is_empty()).collect();
        // choose `t` touched vertices and the first `need - t` untouched ones
        for from_untouched in 0..=need.min(untouched.len()) {
            let t = need - from_untouched;
            if t > touched.len() {
                continue;
            }
            let fresh = &untouched[..from_untouched];
            let mut combo = Vec::new();
            self.choose(v, &touched, t, 0, &mut combo, fresh, budget)?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        v: usize,
        pool: &[usize],
        t: usize,
        from: usize,
        combo: &mut Vec<usize>,
        fresh: &[usize],
        budget: &mut Budget,
    ) -> Result<(), Exhausted> {
        if combo.len() == t {
            let all: Vec<usize> = combo.iter().chain(fresh).copied().collect();
            for &w in &all {
                self.adj[v].push(w);
                self.adj[w].push(v);
            }
            // a vertex that is finished with no path back is fine; connectivity is checked at the end
            self.fill(v + 1, budget)?;
            for &w in &all {
                self.adj[v].pop();
                self.adj[w].pop();
            }
            return Ok(());
        }
        for i in from..pool.len() {
            combo.push(pool[i]);
            self.choose(v, pool, t, i + 1, combo, fresh, budget)?;
            combo.pop();
        }
        Ok(())
    }
}

/// Uniformly random labelled tree on `n` vertices (Prüfer sequence).
pub fn random_tree(n: usize, seed: u64) -> UGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n <= 2 {
        return UGraph::new(n, (1..n).map(|v| (0, v))).expect("tiny tree");
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    UGraph::new(n, edges).expect("Prüfer decoding yields a tree")
}

/// Random connected graph: a random tree plus each remaining pair with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> UGraph {
    let tree = random_tree(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges.shuffle(&mut rng);
    UGraph::new(n, edges).expect("supergraph of a spanning tree is connected")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // OEIS A001349: 1, 1, 2, 6, 21, 112
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn cubic_counts() {
        // connected cubic graphs on 4, 6, 8, 10 vertices: 1, 2, 5, 19
        let mut b = Budget::unlimited();
        let counts: Vec<usize> = [4, 6, 8, 10].iter().map(|&n| regular_graphs(3, n, &mut b).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 19]);
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..20 {
            let t = random_tree(9, seed);
            assert!(t.is_tree());
        }
        assert_eq!(random_connected_graph(8, 0.3, 5), random_connected_graph(8, 0.3, 5));
    }
}
