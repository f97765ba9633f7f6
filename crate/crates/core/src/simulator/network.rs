use crate::error::{Error, Result};
use crate::graphs::{dir, PortNumbering, SymDigraph, UGraph};

/// A ported symmetric digraph viewed as a communication network.
#[derive(Clone, Debug)]
pub struct Network {
    d: SymDigraph,
    port_arc: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(g: &UGraph, ports: &PortNumbering) -> Self {
        Network::from_digraph(dir(g, Some(ports))).expect("dir of a ported graph carries outports")
    }

    /// Accepts any symmetric digraph with outports, including bases with loops
    /// and multi-arcs.
    pub fn from_digraph(d: SymDigraph) -> Result<Self> {
        let ports = d.outports().ok_or_else(|| Error::InvalidPorts { vertex: 0, reason: "network needs outports".into() })?;
        let mut port_arc: Vec<Vec<usize>> = (0..d.n()).map(|v| vec![usize::MAX; d.degree(v)]).collect();
        for v in 0..d.n() {
            for &a in d.out_arcs(v) {
                let p = ports[a];
                if p == 0 || p > d.degree(v) || port_arc[v][p - 1] != usize::MAX {
                    return Err(Error::InvalidPorts { vertex: v, reason: format!("port {p} repeated or out of range") });
                }
                port_arc[v][p - 1] = a;
            }
        }
        Ok(Network { d, port_arc })
    }

    pub fn digraph(&self) -> &SymDigraph {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.d.degree(v)
    }

    /// Arc leaving `v` through port `p`.
    pub fn arc_at(&self, v: usize, p: usize) -> Option<usize> {
        self.port_arc.get(v)?.get(p.checked_sub(1)?).copied()
    }

    /// Port on which a message sent along `a` arrives.
    pub fn inport(&self, a: usize) -> usize {
        self.d.inport(a).expect("network arcs carry ports")
    }

    /// Arc whose messages arrive at `v` on port `p`.
    pub fn arc_into(&self, v: usize, p: usize) -> Option<usize> {
        self.arc_at(v, p).map(|a| self.d.sym(a))
    }
}
