use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graphs::{PortNumbering, UGraph};

/// Arc record: source and target vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub s: usize,
    pub t: usize,
}

/// Directed multigraph with loops, endowed with an involution `sym` on arcs
/// such that `s(a) = t(sym(a))`. Optionally carries an outport per arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymDigraph {
    n: usize,
    arcs: Vec<Arc>,
    sym: Vec<usize>,
    outports: Option<Vec<usize>>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    name: Option<String>,
}

impl SymDigraph {
    pub fn new(n: usize, arcs: Vec<Arc>, sym: Vec<usize>, outports: Option<Vec<usize>>) -> Result<Self> {
        if arcs.len() != sym.len() {
            return Err(Error::InvalidGraph(format!("{} arcs but {} sym entries", arcs.len(), sym.len())));
        }
        for (id, a) in arcs.iter().enumerate() {
            if a.s >= n || a.t >= n {
                return Err(Error::InvalidGraph(format!("arc {id} references a vertex outside 0..{n}")));
            }
        }
        for (a, &b) in sym.iter().enumerate() {
            if b >= arcs.len() {
                return Err(Error::InvalidGraph(format!("sym({a}) = {b} is not an arc")));
            }
            if sym[b] != a {
                return Err(Error::InvalidGraph(format!("sym is not an involution at arc {a}")));
            }
        }
        for (a, &b) in sym.iter().enumerate() {
            if arcs[a].s != arcs[b].t {
                return Err(Error::InvalidGraph(format!("s({a}) != t(sym({a}))")));
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (id, a) in arcs.iter().enumerate() {
            out[a.s].push(id);
            inc[a.t].push(id);
        }
        let mut d = SymDigraph { n, arcs, sym, outports: None, out, inc, name: None };
        if let Some(p) = outports {
            d = d.with_outports(p)?;
        }
        Ok(d)
    }

    /// Attaches an outport map, checking per-vertex bijectivity onto `1..=deg`.
    pub fn with_outports(mut self, outports: Vec<usize>) -> Result<Self> {
        if outports.len() != self.arcs.len() {
            return Err(Error::InvalidGraph(format!(
                "{} outports for {} arcs",
                outports.len(),
                self.arcs.len()
            )));
        }
        for v in 0..self.n {
            let deg = self.out[v].len();
            let mut seen = vec![false; deg + 1];
            for &a in &self.out[v] {
                let p = outports[a];
                if p == 0 || p > deg || seen[p] {
                    return Err(Error::InvalidPorts {
                        vertex: v,
                        reason: format!("outport {p} of arc {a} is not a bijection onto [1,{deg}]"),
                    });
                }
                seen[p] = true;
            }
        }
        self.outports = Some(outports);
        Ok(self)
    }

    pub fn without_outports(mut self) -> Self {
        self.outports = None;
        self
    }

    /// Outports numbered in arc-id order at every vertex.
    pub fn with_canonical_outports(self) -> Self {
        let mut ports = vec![0; self.arcs.len()];
        for v in 0..self.n {
            for (i, &a) in self.out[v].iter().enumerate() {
                ports[a] = i + 1;
            }
        }
        self.with_outports(ports).expect("canonical outports are bijective")
    }

    /// Outports shuffled per vertex by a seeded generator.
    pub fn with_random_outports(self, seed: u64) -> Self {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut ports = vec![0; self.arcs.len()];
        for v in 0..self.n {
            let mut labels: Vec<usize> = (1..=self.out[v].len()).collect();
            labels.shuffle(&mut rng);
            for (&a, &p) in self.out[v].iter().zip(&labels) {
                ports[a] = p;
            }
        }
        self.with_outports(ports).expect("shuffled outports are bijective")
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
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

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: usize) -> Arc {
        self.arcs[a]
    }

    pub fn sym(&self, a: usize) -> usize {
        self.sym[a]
    }

    pub fn sym_map(&self) -> &[usize] {
        &self.sym
    }

    pub fn outports(&self) -> Option<&[usize]> {
        self.outports.as_deref()
    }

    pub fn outport(&self, a: usize) -> Option<usize> {
        self.outports.as_ref().map(|p| p[a])
    }

    /// Port on which an arc arrives: the outport of its symmetric arc.
    pub fn inport(&self, a: usize) -> Option<usize> {
        self.outport(self.sym[a])
    }

    /// Arc leaving `v` through port `p`.
    pub fn arc_at_port(&self, v: usize, p: usize) -> Option<usize> {
        let ports = self.outports.as_ref()?;
        self.out[v].iter().copied().find(|&a| ports[a] == p)
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn is_loop(&self, a: usize) -> bool {
        self.arcs[a].s == self.arcs[a].t
    }

    pub fn is_self_symmetric(&self, a: usize) -> bool {
        self.sym[a] == a
    }

    pub fn has_loops(&self) -> bool {
        (0..self.arcs.len()).any(|a| self.is_loop(a))
    }

    /// No loops and no multi-arcs.
    pub fn is_simple(&self) -> bool {
        if self.has_loops() {
            return false;
        }
        (0..self.n).all(|v| {
            let mut targets: Vec<usize> = self.out[v].iter().map(|&a| self.arcs[a].t).collect();
            targets.sort_unstable();
            targets.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let v = self.arcs[a].t;
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Number of arcs `u -> v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.out[u].iter().filter(|&&a| self.arcs[a].t == v).count()
    }

    /// One representative per sym-orbit: arcs with `sym(a) >= a`.
    pub fn sym_representatives(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arcs.len()).filter(move |&a| self.sym[a] >= a)
    }

    /// Converts a simple symmetric digraph back into an undirected graph (and
    /// its port numbering when outports are present).
    pub fn to_ugraph(&self) -> Result<(UGraph, Option<PortNumbering>)> {
        if !self.is_simple() {
            return Err(Error::InvalidGraph("only simple symmetric digraphs convert to graphs".into()));
        }
        let edges = self.sym_representatives().map(|a| (self.arcs[a].s, self.arcs[a].t));
        let mut g = UGraph::new(self.n, edges)?;
        if let Some(name) = &self.name {
            g = g.with_name(name.clone());
        }
        let ports = match &self.outports {
            None => None,
            Some(p) => {
                let mut table = vec![Vec::new(); self.n];
                for v in 0..self.n {
                    table[v] = vec![0; self.out[v].len()];
                    for &a in &self.out[v] {
                        table[v][p[a] - 1] = self.arcs[a].t;
                    }
                }
                Some(PortNumbering::from_table(&g, table)?)
            }
        };
        Ok((g, ports))
    }

    /// Relabels vertex `v` as `perm[v]`; arc ids are preserved.
    pub fn relabel_vertices(&self, perm: &[usize]) -> SymDigraph {
        let arcs = self.arcs.iter().map(|a| Arc { s: perm[a.s], t: perm[a.t] }).collect();
        let mut d = SymDigraph::new(self.n, arcs, self.sym.clone(), self.outports.clone())
            .expect("relabeling preserves validity");
        d.name = self.name.clone();
        d
    }

    /// Renumbers arcs: arc `a` becomes `perm[a]`.
    pub fn relabel_arcs(&self, perm: &[usize]) -> SymDigraph {
        let m = self.arcs.len();
        let mut arcs = vec![Arc { s: 0, t: 0 }; m];
        let mut sym = vec![0; m];
        let mut ports = self.outports.as_ref().map(|_| vec![0; m]);
        for a in 0..m {
            arcs[perm[a]] = self.arcs[a];
            sym[perm[a]] = perm[self.sym[a]];
            if let (Some(dst), Some(src)) = (ports.as_mut(), self.outports.as_ref()) {
                dst[perm[a]] = src[a];
            }
        }
        let mut d = SymDigraph::new(self.n, arcs, sym, ports).expect("relabeling preserves validity");
        d.name = self.name.clone();
        d
    }

    /// Count of self-symmetric loops at each vertex.
    pub fn self_symmetric_loops(&self, v: usize) -> usize {
        self.out[v].iter().filter(|&&a| self.sym[a] == a).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bouquet_pair() -> SymDigraph {
        SymDigraph::new(1, vec![Arc { s: 0, t: 0 }, Arc { s: 0, t: 0 }], vec![1, 0], None).unwrap()
    }

    #[test]
    fn involution_checked() {
        let err = SymDigraph::new(2, vec![Arc { s: 0, t: 1 }, Arc { s: 1, t: 0 }], vec![0, 0], None).unwrap_err();
        assert!(err.to_string().contains("involution"));
        let err = SymDigraph::new(2, vec![Arc { s: 0, t: 1 }], vec![0], None).unwrap_err();
        assert!(err.to_string().contains("s(0) != t(sym(0))"));
    }

    #[test]
    fn loop_pair_is_valid_and_not_simple() {
        let d = bouquet_pair();
        assert!(!d.is_simple());
        assert_eq!(d.degree(0), 2);
        assert_eq!(d.self_symmetric_loops(0), 0);
    }

    #[test]
    fn outports_must_be_bijective() {
        let d = bouquet_pair();
        assert!(d.clone().with_outports(vec![1, 1]).is_err());
        assert!(d.clone().with_outports(vec![3, 1]).is_err());
        let d = d.with_outports(vec![2, 1]).unwrap();
        assert_eq!(d.inport(0), Some(1));
        assert_eq!(d.arc_at_port(0, 1), Some(1));
    }

    #[test]
    fn relabel_arcs_keeps_involution() {
        let d = bouquet_pair().with_canonical_outports();
        let r = d.relabel_arcs(&[1, 0]);
        assert_eq!(r.sym(0), 1);
        assert_eq!(r.outport(0), Some(2));
    }
}

impl SymDigraph {
    /// Builds a symmetric digraph from an undirected multigraph description:
    /// each entry of `edges` (which may repeat, `u != v`) becomes a sym-paired
    /// arc pair, each vertex in `self_loops` gets one self-symmetric loop, and
    /// each vertex in `loop_pairs` gets two loops exchanged by `sym`.
    ///
    /// Arcs are numbered in the order: self loops, loop pairs, edges.
    pub fn from_multigraph(
        n: usize,
        edges: &[(usize, usize)],
        self_loops: &[usize],
        loop_pairs: &[usize],
    ) -> Result<SymDigraph> {
        let mut arcs = Vec::new();
        let mut sym = Vec::new();
        for &v in self_loops {
            sym.push(arcs.len());
            arcs.push(Arc { s: v, t: v });
        }
        for &v in loop_pairs {
            let id = arcs.len();
            arcs.push(Arc { s: v, t: v });
            arcs.push(Arc { s: v, t: v });
            sym.push(id + 1);
            sym.push(id);
        }
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("edge list contains loop at {u}; use self_loops or loop_pairs")));
            }
            let id = arcs.len();
            arcs.push(Arc { s: u, t: v });
            arcs.push(Arc { s: v, t: u });
            sym.push(id + 1);
            sym.push(id);
        }
        SymDigraph::new(n, arcs, sym, None)
    }
}
