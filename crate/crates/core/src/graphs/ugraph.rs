use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Simple connected undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    name: Option<String>,
}

/// Size parameters used when reporting message complexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GraphMetrics {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub diameter: usize,
}

impl UGraph {
    /// Builds and validates a graph. Edges are normalised to `(min, max)` and sorted.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Self::new_unchecked_connectivity(n, edges)?;
        if let Some(v) = g.first_unreachable() {
            return Err(Error::InvalidGraph(format!("graph is disconnected: vertex {v} unreachable from 0")));
        }
        Ok(g)
    }

    /// Like [`UGraph::new`] but accepts disconnected graphs. Used by generators
    /// that filter on connectivity themselves.
    pub(crate) fn new_unchecked_connectivity(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {{{u},{v}}} references a vertex outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {{{},{}}}", w[0].0, w[0].1)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(UGraph { n, edges: list, adj, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list with `u < v` in every pair.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`UGraph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    fn first_unreachable(&self) -> Option<usize> {
        let dist = self.bfs(0);
        dist.iter().position(Option::is_none)
    }

    /// Breadth-first distances from `src`.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn metrics(&self) -> GraphMetrics {
        let diameter = (0..self.n)
            .map(|s| self.bfs(s).into_iter().map(|d| d.unwrap_or(0)).max().unwrap_or(0))
            .max()
            .unwrap_or(0);
        GraphMetrics {
            n: self.n,
            m: self.edges.len(),
            max_degree: self.adj.iter().map(Vec::len).max().unwrap_or(0),
            diameter,
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> UGraph {
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v]));
        let mut g = UGraph::new_unchecked_connectivity(self.n, edges).expect("relabeling preserves validity");
        g.name = self.name.clone();
        g
    }

    /// Whether the graph has a perfect matching (exhaustive, with odd-component pruning).
    pub fn has_perfect_matching(&self) -> bool {
        crate::coverings::matching::perfect_matching_simple(self).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_is_smallest_connected() {
        let g = UGraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
        assert!(g.is_tree());
    }

    #[test]
    fn duplicate_edge_is_named() {
        let err = UGraph::new(3, [(0, 1), (1, 0)]).unwrap_err();
        assert!(err.to_string().contains("duplicate edge {0,1}"), "{err}");
    }

    #[test]
    fn disconnected_rejected() {
        let err = UGraph::new(3, [(0, 1)]).unwrap_err();
        assert!(err.to_string().contains("vertex 2"), "{err}");
    }

    #[test]
    fn loops_and_range_rejected() {
        assert!(UGraph::new(2, [(1, 1)]).is_err());
        assert!(UGraph::new(2, [(0, 2)]).is_err());
        assert!(UGraph::new(0, []).is_err());
    }

    #[test]
    fn metrics_of_path() {
        let g = UGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = g.metrics();
        assert_eq!((m.n, m.m, m.max_degree, m.diameter), (4, 3, 2, 3));
    }
}
