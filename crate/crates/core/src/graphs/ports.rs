use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::coverings::{classify_morphism, CoveringMap};
use crate::error::{Error, Result};
use crate::graphs::{dir, SymDigraph, UGraph};

/// Per-vertex bijection from incident edges to `1..=deg`.
///
/// Stored as a table: `neighbor_at[u][p - 1]` is the neighbour reached from
/// `u` through port `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortNumbering {
    neighbor_at: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PortMode {
    /// Ports in ascending neighbour-id order.
    Canonical,
    /// Per-vertex shuffle from a seeded generator.
    Random(u64),
}

impl PortNumbering {
    /// Validates a port table against `g`.
    pub fn from_table(g: &UGraph, neighbor_at: Vec<Vec<usize>>) -> Result<Self> {
        if neighbor_at.len() != g.n() {
            return Err(Error::InvalidPorts {
                vertex: neighbor_at.len().min(g.n()),
                reason: format!("table has {} rows for {} vertices", neighbor_at.len(), g.n()),
            });
        }
        for (u, row) in neighbor_at.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(u) {
                return Err(Error::InvalidPorts {
                    vertex: u,
                    reason: format!("ports {row:?} are not a bijection onto the neighbours {:?}", g.neighbors(u)),
                });
            }
        }
        Ok(PortNumbering { neighbor_at })
    }

    /// Builds ports from `(u, v, p)` triples meaning `δ_u({u, v}) = p`.
    pub fn from_triples(g: &UGraph, triples: &[(usize, usize, usize)]) -> Result<Self> {
        let mut table: Vec<Vec<Option<usize>>> = (0..g.n()).map(|u| vec![None; g.degree(u)]).collect();
        for &(u, v, p) in triples {
            if u >= g.n() || !g.has_edge(u, v) {
                return Err(Error::InvalidPorts { vertex: u.min(g.n().saturating_sub(1)), reason: format!("{{{u},{v}}} is not an edge") });
            }
            if p == 0 || p > g.degree(u) {
                return Err(Error::InvalidPorts { vertex: u, reason: format!("port {p} outside [1,{}]", g.degree(u)) });
            }
            if table[u][p - 1].replace(v).is_some() {
                return Err(Error::InvalidPorts { vertex: u, reason: format!("port {p} assigned twice") });
            }
        }
        let mut rows = Vec::with_capacity(g.n());
        for (u, row) in table.into_iter().enumerate() {
            let row: Option<Vec<usize>> = row.into_iter().collect();
            match row {
                Some(r) => rows.push(r),
                None => return Err(Error::InvalidPorts { vertex: u, reason: "some incident edge has no port".into() }),
            }
        }
        Self::from_table(g, rows)
    }

    pub fn n(&self) -> usize {
        self.neighbor_at.len()
    }

    /// Neighbour reached from `u` through port `p` (1-based).
    pub fn neighbor(&self, u: usize, p: usize) -> Option<usize> {
        p.checked_sub(1).and_then(|i| self.neighbor_at.get(u)?.get(i).copied())
    }

    /// `δ_u({u, v})`.
    pub fn port(&self, u: usize, v: usize) -> Option<usize> {
        self.neighbor_at.get(u)?.iter().position(|&w| w == v).map(|i| i + 1)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.neighbor_at
    }

    /// `(u, v, p)` triples sorted ascending.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self
            .neighbor_at
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().enumerate().map(move |(i, &v)| (u, v, i + 1)))
            .collect();
        t.sort_unstable();
        t
    }
}

pub fn assign_ports(g: &UGraph, mode: PortMode) -> PortNumbering {
    let mut table: Vec<Vec<usize>> = (0..g.n()).map(|u| g.neighbors(u).to_vec()).collect();
    if let PortMode::Random(seed) = mode {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for row in &mut table {
            row.shuffle(&mut rng);
        }
    }
    PortNumbering { neighbor_at: table }
}

/// Pulls the base's outports back along a symmetric covering `dir(g) -> base`,
/// so that `(dir(g), δ)` covers the ported base port-preservingly.
pub fn lift_ports(g: &UGraph, base: &SymDigraph, cover: &CoveringMap) -> Result<PortNumbering> {
    let base_ports = base
        .outports()
        .ok_or_else(|| Error::InvalidPorts { vertex: 0, reason: "base carries no outports".into() })?;
    let total = dir(g, None);
    if cover.total().n() != total.n() || cover.total().arcs() != total.arcs() || cover.total().sym_map() != total.sym_map() {
        return Err(Error::NotCovering("covering total is not dir(g)".into()));
    }
    if cover.base().arcs() != base.arcs() || cover.base().sym_map() != base.sym_map() {
        return Err(Error::NotCovering("covering base differs from the given base".into()));
    }
    let report = classify_morphism(&total, base, cover.vmap(), cover.amap())?;
    if !report.is_symmetric_covering {
        return Err(Error::NotCovering(report.first_failure()));
    }
    let mut table: Vec<Vec<usize>> = (0..g.n()).map(|u| vec![usize::MAX; g.degree(u)]).collect();
    for (a, arc) in total.arcs().iter().enumerate() {
        let p = base_ports[cover.amap()[a]];
        table[arc.s][p - 1] = arc.t;
    }
    PortNumbering::from_table(g, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> UGraph {
        UGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn canonical_k2() {
        let g = UGraph::new(2, [(0, 1)]).unwrap();
        let p = assign_ports(&g, PortMode::Canonical);
        assert_eq!(p.port(0, 1), Some(1));
        assert_eq!(p.port(1, 0), Some(1));
    }

    #[test]
    fn canonical_star_orders_by_neighbor() {
        let p = assign_ports(&star(), PortMode::Canonical);
        assert_eq!((p.port(0, 1), p.port(0, 2), p.port(0, 3)), (Some(1), Some(2), Some(3)));
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let c4 = UGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(assign_ports(&c4, PortMode::Random(7)), assign_ports(&c4, PortMode::Random(7)));
    }

    #[test]
    fn triples_round_trip() {
        let g = star();
        let p = assign_ports(&g, PortMode::Random(3));
        assert_eq!(PortNumbering::from_triples(&g, &p.triples()).unwrap(), p);
    }

    #[test]
    fn bad_tables_rejected() {
        let g = star();
        assert!(PortNumbering::from_table(&g, vec![vec![1, 1, 3], vec![0], vec![0], vec![0]]).is_err());
        assert!(PortNumbering::from_triples(&g, &[(0, 1, 1), (0, 2, 1)]).is_err());
    }
}
