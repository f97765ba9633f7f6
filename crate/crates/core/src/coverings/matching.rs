//! Matching routines used to split equitable partitions into arc fibres.
//!
//! General graphs use Edmonds' blossom algorithm; regular bipartite
//! multigraphs are peeled one perfect matching at a time with augmenting
//! paths (König); even-regular multigraphs are split into 2-factors through
//! an Euler orientation (Petersen).

use std::collections::VecDeque;

use crate::budget::{Budget, Exhausted};
use crate::graphs::UGraph;

const NONE: usize = usize::MAX;

/// Maximum matching of a general graph given by adjacency lists.
/// Returns `mate[v]`, `usize::MAX` for unmatched vertices.
pub fn maximum_matching(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut m = Blossom { adj, mate: vec![NONE; n], p: vec![NONE; n], base: (0..n).collect(), used: vec![false; n], blossom: vec![false; n] };
    // greedy start
    for v in 0..n {
        if m.mate[v] == NONE {
            if let Some(&w) = adj[v].iter().find(|&&w| w != v && m.mate[w] == NONE) {
                m.mate[v] = w;
                m.mate[w] = v;
            }
        }
    }
    for root in 0..n {
        if m.mate[root] == NONE {
            let mut v = m.find_path(root);
            while v != NONE {
                let pv = m.p[v];
                let ppv = m.mate[pv];
                m.mate[v] = pv;
                m.mate[pv] = v;
                v = ppv;
            }
        }
    }
    m.mate
}

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    p: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.p[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.p[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.p[v] = child;
            child = self.mate[v];
            v = self.p[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.p.iter_mut().for_each(|p| *p = NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if to == v || self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.p[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.p[to] == NONE {
                    self.p[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        NONE
    }
}

/// Perfect matching of a simple graph as a list of edges `(u, v)` with `u < v`.
pub fn perfect_matching_simple(g: &UGraph) -> Option<Vec<(usize, usize)>> {
    let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
    let mate = maximum_matching(&adj);
    if mate.contains(&NONE) {
        return None;
    }
    Some((0..g.n()).filter(|&v| v < mate[v]).map(|v| (v, mate[v])).collect())
}

/// Searches for a Tutte set: `S` with `|S| <= max_size` such that `G - S`
/// has more than `|S|` odd components. Such a set certifies that no perfect
/// matching exists.
pub fn tutte_set(adj: &[Vec<usize>], max_size: usize) -> Option<Vec<usize>> {
    let mut chosen = Vec::new();
    for size in 0..=max_size.min(adj.len()) {
        if let Some(s) = tutte_rec(adj, size, 0, &mut chosen) {
            return Some(s);
        }
    }
    None
}

fn tutte_rec(adj: &[Vec<usize>], size: usize, from: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    if chosen.len() == size {
        return (odd_components(adj, chosen) > size).then(|| chosen.clone());
    }
    for v in from..adj.len() {
        chosen.push(v);
        if let Some(s) = tutte_rec(adj, size, v + 1, chosen) {
            return Some(s);
        }
        chosen.pop();
    }
    None
}

fn odd_components(adj: &[Vec<usize>], removed: &[usize]) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    for &r in removed {
        seen[r] = true;
    }
    let mut odd = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        odd += size % 2;
    }
    odd
}

/// Perfect matching of a bipartite multigraph with `n` vertices per side,
/// restricted to edges with `alive[e]`. Returns the chosen edge per left vertex.
pub fn bipartite_perfect_matching(n: usize, edges: &[(usize, usize)], alive: &[bool]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(l, _)) in edges.iter().enumerate() {
        if alive[e] {
            adj[l].push(e);
        }
    }
    let mut right_edge = vec![NONE; n];
    for l in 0..n {
        let mut seen = vec![false; n];
        if !kuhn(l, &adj, edges, &mut right_edge, &mut seen) {
            return None;
        }
    }
    let mut left_edge = vec![NONE; n];
    for &e in right_edge.iter() {
        left_edge[edges[e].0] = e;
    }
    Some(left_edge)
}

fn kuhn(l: usize, adj: &[Vec<usize>], edges: &[(usize, usize)], right_edge: &mut [usize], seen: &mut [bool]) -> bool {
    for &e in &adj[l] {
        let r = edges[e].1;
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if right_edge[r] == NONE || kuhn(edges[right_edge[r]].0, adj, edges, right_edge, seen) {
            right_edge[r] = e;
            return true;
        }
    }
    false
}

/// Splits a regular bipartite multigraph into perfect matchings.
/// Returns `None` if the input is not regular.
pub fn regular_bipartite_decomposition(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if n == 0 {
        return Some(Vec::new());
    }
    if edges.len() % n != 0 {
        return None;
    }
    let c = edges.len() / n;
    let mut alive = vec![true; edges.len()];
    let mut out = Vec::with_capacity(c);
    for _ in 0..c {
        let m = bipartite_perfect_matching(n, edges, &alive)?;
        for &e in &m {
            alive[e] = false;
        }
        out.push(m);
    }
    Some(out)
}

/// Orients every edge of a multigraph whose vertices all have even degree so
/// that in-degree equals out-degree everywhere. Loops `(v, v)` count twice
/// and are left as given. `result[e]` is true when edge `e` is oriented
/// from its first to its second endpoint.
pub fn euler_orientation(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut inc = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u != v {
            inc[u].push(e);
            inc[v].push(e);
        }
    }
    let mut used = vec![false; edges.len()];
    let mut forward = vec![true; edges.len()];
    let mut next = vec![0usize; n];
    for start in 0..n {
        loop {
            let mut cur = start;
            let mut moved = false;
            loop {
                while next[cur] < inc[cur].len() && used[inc[cur][next[cur]]] {
                    next[cur] += 1;
                }
                if next[cur] == inc[cur].len() {
                    break;
                }
                let e = inc[cur][next[cur]];
                used[e] = true;
                moved = true;
                let (u, v) = edges[e];
                forward[e] = u == cur;
                cur = if u == cur { v } else { u };
            }
            if !moved {
                break;
            }
        }
    }
    forward
}

/// One element of a generalized perfect matching: an edge (index into the
/// edge list) or a self-symmetric loop (index into the loop list).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cover {
    Edge(usize),
    Loop(usize),
}

/// Finds `k` pairwise disjoint generalized perfect matchings of a multigraph
/// on `n` vertices. A generalized perfect matching covers each vertex exactly
/// once, either by an incident non-loop edge or by one of its loops. Every
/// loop in `loops` must be used by some matching.
///
/// Returns `Ok(None)` when no such family exists.
pub fn disjoint_generalized_matchings(
    n: usize,
    edges: &[(usize, usize)],
    loops: &[usize],
    k: usize,
    budget: &mut Budget,
) -> Result<Option<Vec<Vec<Cover>>>, Exhausted> {
    let mut loops_at = vec![Vec::new(); n];
    for (i, &v) in loops.iter().enumerate() {
        loops_at[v].push(i);
    }
    if loops_at.iter().any(|l| l.len() > k) {
        return Ok(None);
    }
    if k == 0 {
        return Ok(if loops.is_empty() { Some(Vec::new()) } else { None });
    }
    let mut s = GmSearch {
        n,
        edges,
        loops_at,
        k,
        edge_used: vec![false; edges.len()],
        loop_used: vec![false; loops.len()],
        covered: vec![false; n],
        current: Vec::new(),
        done: Vec::new(),
    };
    if s.level(budget)? {
        Ok(Some(s.done))
    } else {
        Ok(None)
    }
}

struct GmSearch<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    loops_at: Vec<Vec<usize>>,
    k: usize,
    edge_used: Vec<bool>,
    loop_used: Vec<bool>,
    covered: Vec<bool>,
    current: Vec<Cover>,
    done: Vec<Vec<Cover>>,
}

impl GmSearch<'_> {
    fn unused_loops(&self, v: usize) -> usize {
        self.loops_at[v].iter().filter(|&&l| !self.loop_used[l]).count()
    }

    /// Starts matching number `done.len()`.
    fn level(&mut self, budget: &mut Budget) -> Result<bool, Exhausted> {
        if self.done.len() == self.k {
            return Ok(self.loop_used.iter().all(|&u| u));
        }
        let remaining = self.k - self.done.len();
        if (0..self.n).any(|v| self.unused_loops(v) > remaining) {
            return Ok(false);
        }
        self.covered.iter_mut().for_each(|c| *c = false);
        self.extend(budget)
    }

    /// Whether the uncovered vertices admit a generalized perfect matching,
    /// via the doubled-graph reduction: two copies of the graph, with each
    /// loop vertex joined to its own copy.
    fn completable(&self) -> bool {
        let n = self.n;
        let mut adj = vec![Vec::new(); 2 * n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !self.edge_used[e] && !self.covered[u] && !self.covered[v] {
                adj[u].push(v);
                adj[v].push(u);
                adj[n + u].push(n + v);
                adj[n + v].push(n + u);
            }
        }
        let mut active = 0;
        for v in 0..n {
            if self.covered[v] {
                continue;
            }
            active += 1;
            if self.unused_loops(v) > 0 {
                adj[v].push(n + v);
                adj[n + v].push(v);
            }
        }
        let mate = maximum_matching(&adj);
        let matched = (0..n).filter(|&v| !self.covered[v] && mate[v] != NONE).count();
        matched == active
    }

    fn extend(&mut self, budget: &mut Budget) -> Result<bool, Exhausted> {
        budget.tick()?;
        let Some(v) = (0..self.n).find(|&v| !self.covered[v]) else {
            let m = std::mem::take(&mut self.current);
            self.done.push(m);
            let saved = self.covered.clone();
            if self.level(budget)? {
                return Ok(true);
            }
            self.covered = saved;
            self.current = self.done.pop().expect("pushed above");
            return Ok(false);
        };
        if !self.completable() {
            return Ok(false);
        }
        let remaining = self.k - self.done.len();
        let forced_loop = self.unused_loops(v) == remaining;
        if let Some(&l) = self.loops_at[v].iter().find(|&&l| !self.loop_used[l]) {
            self.loop_used[l] = true;
            self.covered[v] = true;
            self.current.push(Cover::Loop(l));
            if self.extend(budget)? {
                return Ok(true);
            }
            self.current.pop();
            self.covered[v] = false;
            self.loop_used[l] = false;
        }
        if forced_loop {
            return Ok(false);
        }
        // One representative edge per distinct neighbour: parallel edges are interchangeable.
        let mut tried: Vec<usize> = Vec::new();
        for e in 0..self.edges.len() {
            if self.edge_used[e] {
                continue;
            }
            let (a, b) = self.edges[e];
            let w = if a == v { b } else if b == v { a } else { continue };
            if w == v || self.covered[w] || tried.contains(&w) {
                continue;
            }
            if self.unused_loops(w) == remaining {
                continue;
            }
            tried.push(w);
            self.edge_used[e] = true;
            self.covered[v] = true;
            self.covered[w] = true;
            self.current.push(Cover::Edge(e));
            if self.extend(budget)? {
                return Ok(true);
            }
            self.current.pop();
            self.covered[v] = false;
            self.covered[w] = false;
            self.edge_used[e] = false;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    fn adj_of(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    #[test]
    fn blossom_on_odd_cycles() {
        // two triangles joined by an edge: perfect matching needs the blossom
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)];
        let mate = maximum_matching(&adj_of(6, &edges));
        assert!(mate.iter().all(|&m| m != NONE));
        let c5 = maximum_matching(&adj_of(5, &cycle(5)));
        assert_eq!(c5.iter().filter(|&&m| m == NONE).count(), 1);
    }

    #[test]
    fn tutte_on_claw() {
        let adj = adj_of(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(tutte_set(&adj, 2), Some(vec![0]));
    }

    #[test]
    fn k33_decomposes() {
        let edges: Vec<(usize, usize)> = (0..3).flat_map(|l| (0..3).map(move |r| (l, r))).collect();
        let dec = regular_bipartite_decomposition(3, &edges).unwrap();
        assert_eq!(dec.len(), 3);
        let mut all: Vec<usize> = dec.concat();
        all.sort();
        assert_eq!(all, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn euler_orientation_balances() {
        let mut edges = cycle(4);
        edges.extend([(0, 2), (0, 2), (1, 1)]);
        let f = euler_orientation(4, &edges);
        let mut bal = [0i32; 4];
        for (e, &(u, v)) in edges.iter().enumerate() {
            let (a, b) = if f[e] { (u, v) } else { (v, u) };
            bal[a] += 1;
            bal[b] -= 1;
        }
        assert_eq!(bal, [0; 4]);
    }

    #[test]
    fn generalized_matchings_with_loops() {
        let mut b = Budget::unlimited();
        // path 0-1-2 with a loop at 2: 0-1 plus loop
        let r = disjoint_generalized_matchings(3, &[(0, 1), (1, 2)], &[2], 1, &mut b).unwrap();
        assert_eq!(r, Some(vec![vec![Cover::Edge(0), Cover::Loop(0)]]));
        // K4 has 3 disjoint perfect matchings
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert!(disjoint_generalized_matchings(4, &k4, &[], 3, &mut b).unwrap().is_some());
        // C6 has 2 but not 3
        assert!(disjoint_generalized_matchings(6, &cycle(6), &[], 2, &mut b).unwrap().is_some());
        assert!(disjoint_generalized_matchings(6, &cycle(6), &[], 3, &mut b).unwrap().is_none());
        // a loop that no matching can absorb
        assert!(disjoint_generalized_matchings(2, &[(0, 1)], &[0], 1, &mut b).unwrap().is_none());
    }
}
