use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;


use crate::budget::{Budget, Exhausted};
use crate::coverings::partition::{equitable_partitions, partition_bases, quotient_exists, QuotientOutcome};
use crate::coverings::CoveringMap;
use crate::error::{Error, Result};
use crate::graphs::{Arc, SymDigraph};
use crate::lifts::canonical_form;

/// Result of [`enumerate_bases`].
#[derive(Clone, Debug)]
pub struct BaseEnumeration {
    /// One covering per base isomorphism class, ordered by sheet count.
    pub bases: Vec<CoveringMap>,
    /// False when the budget ran out before every sheet count was searched.
    pub complete: bool,
    /// Sheet counts whose partition search finished.
    pub sheets_searched: Vec<usize>,
    pub partitions_examined: u64,
}

/// Options for base search.
#[derive(Clone, Copy, Debug, Default)]
pub struct BaseSearch {
    /// Largest sheet count to try; all divisors of `n` when `None`.
    pub max_q: Option<usize>,
}

/// Sheet counts `q >= 2` dividing `n`, largest first.
pub fn sheet_counts(n: usize, max_q: Option<usize>) -> Vec<usize> {
    let mut qs: Vec<usize> = (2..=n).filter(|q| n % q == 0 && max_q.is_none_or(|m| *q <= m)).collect();
    qs.reverse();
    qs
}

/// Every base of a proper symmetric covering of `d`, up to isomorphism,
/// including each achievable sym-structure over the same partition.
pub fn enumerate_bases(d: &SymDigraph, opts: BaseSearch, budget: &mut Budget) -> Result<BaseEnumeration> {
    let mut found: BTreeMap<Vec<u64>, CoveringMap> = BTreeMap::new();
    let mut order: Vec<Vec<u64>> = Vec::new();
    let mut searched = Vec::new();
    let mut examined = 0u64;
    let mut complete = true;
    let mut qs = sheet_counts(d.n(), opts.max_q);
    qs.reverse();
    for q in qs {
        let mut failure: Option<Error> = None;
        let run = equitable_partitions(d, q, budget, |p, budget| {
            examined += 1;
            match partition_bases(d, p, budget) {
                Ok(covers) => {
                    for c in covers {
                        let key = canonical_form(c.base()).certificate().to_vec();
                        if !found.contains_key(&key) {
                            order.push(key.clone());
                            found.insert(key, c);
                        }
                    }
                    Ok(ControlFlow::Continue(()))
                }
                Err(Error::Budget) => Err(Exhausted),
                Err(e) => {
                    failure = Some(e);
                    Ok(ControlFlow::Break(()))
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        match run {
            Ok(_) => searched.push(q),
            Err(Exhausted) => {
                complete = false;
                break;
            }
        }
    }
    let bases = order.into_iter().map(|k| found.remove(&k).expect("recorded")).collect();
    Ok(BaseEnumeration { bases, complete, sheets_searched: searched, partitions_examined: examined })
}

/// Tri-state minimality verdict.
#[derive(Clone, Debug)]
pub enum Minimality {
    Minimal { sheets_searched: Vec<usize> },
    NotMinimal(Box<CoveringMap>),
    Unknown { sheets_searched: Vec<usize> },
}

impl Minimality {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Minimality::Minimal { .. } => Some(true),
            Minimality::NotMinimal(_) => Some(false),
            Minimality::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&CoveringMap> {
        match self {
            Minimality::NotMinimal(c) => Some(c),
            _ => None,
        }
    }
}

/// Whether `d` admits no proper symmetric covering. Stops at the first base
/// found; sheet counts are tried from the largest down.
pub fn is_minimal(d: &SymDigraph, budget: &mut Budget) -> Result<Minimality> {
    let mut searched = Vec::new();
    for q in sheet_counts(d.n(), None) {
        let mut witness: Option<CoveringMap> = None;
        let mut failure: Option<Error> = None;
        let run = equitable_partitions(d, q, budget, |p, budget| match quotient_exists(d, p, false, budget) {
            Ok(QuotientOutcome::Covered(c)) => {
                witness = Some(c);
                Ok(ControlFlow::Break(()))
            }
            Ok(QuotientOutcome::Obstructed(_)) => Ok(ControlFlow::Continue(())),
            Err(Error::Budget) => Err(Exhausted),
            Err(e) => {
                failure = Some(e);
                Ok(ControlFlow::Break(()))
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(c) = witness {
            return Ok(Minimality::NotMinimal(Box::new(c)));
        }
        match run {
            Ok(_) => searched.push(q),
            Err(Exhausted) => return Ok(Minimality::Unknown { sheets_searched: searched }),
        }
    }
    Ok(Minimality::Minimal { sheets_searched: searched })
}

/// Port-aware colour refinement: two vertices stay together only if, port
/// by port, their neighbours share a colour and the arcs share a return port.
pub fn port_refinement(d: &SymDigraph) -> Result<Vec<usize>> {
    if d.outports().is_none() {
        return Err(Error::InvalidPorts { vertex: 0, reason: "graph carries no outports".into() });
    }
    let mut color: Vec<usize> = (0..d.n()).map(|v| d.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<(usize, usize, usize)>)> = (0..d.n())
            .map(|v| {
                let mut s: Vec<(usize, usize, usize)> = d
                    .out_arcs(v)
                    .iter()
                    .map(|&a| (d.outport(a).expect("ported"), d.inport(a).expect("ported"), color[d.arc(a).t]))
                    .collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let mut sorted: Vec<_> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        color = sigs.iter().map(|s| sorted.binary_search(&s).expect("present")).collect();
        if sorted.len() == classes {
            return Ok(color);
        }
        classes = sorted.len();
    }
}

/// The minimum port-preserving symmetric quotient of a ported digraph.
pub fn ported_quotient(d: &SymDigraph) -> Result<CoveringMap> {
    let color = port_refinement(d)?;
    let k = color.iter().max().map_or(0, |c| c + 1);
    let mut rep = vec![usize::MAX; k];
    for (v, &c) in color.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = v;
        }
    }
    // base arc ids: (class, outport) in order
    let mut id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (c, &r) in rep.iter().enumerate() {
        for &a in d.out_arcs(r) {
            let next = id.len();
            id.insert((c, d.outport(a).expect("ported")), next);
        }
    }
    let mut arcs = vec![Arc { s: 0, t: 0 }; id.len()];
    let mut sym = vec![0; id.len()];
    let mut ports = vec![0; id.len()];
    for (c, &r) in rep.iter().enumerate() {
        for &a in d.out_arcs(r) {
            let p = d.outport(a).expect("ported");
            let me = id[&(c, p)];
            let t = color[d.arc(a).t];
            arcs[me] = Arc { s: c, t };
            sym[me] = id[&(t, d.inport(a).expect("ported"))];
            ports[me] = p;
        }
    }
    let base = SymDigraph::new(k, arcs, sym, Some(ports))?;
    let amap = (0..d.arc_count()).map(|a| id[&(color[d.arc(a).s], d.outport(a).expect("ported"))]).collect();
    CoveringMap::new(d.clone(), base, color, amap)
}

/// Minimality of a ported digraph for port-preserving symmetric coverings:
/// holds exactly when port refinement separates every vertex.
pub fn is_minimal_ported(d: &SymDigraph) -> Result<bool> {
    let color = port_refinement(d)?;
    Ok(color.iter().collect::<BTreeSet<_>>().len() == d.n())
}

/// Checks that the preimage of a spanning tree of the base is `q` disjoint
/// trees, each mapped isomorphically onto the tree. `tree` lists one arc of
/// each sym pair in the tree.
pub fn fibre_forest_check(c: &CoveringMap, tree: &[usize]) -> Result<()> {
    let base = c.base();
    let total = c.total();
    let mut in_tree = vec![false; base.arc_count()];
    for &a in tree {
        in_tree[a] = true;
        in_tree[base.sym(a)] = true;
    }
    if tree.len() + 1 != base.n() {
        return Err(Error::InvalidGraph("tree does not have |V(base)| - 1 edges".into()));
    }
    let mut parent: Vec<usize> = (0..total.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges = 0usize;
    for a in 0..total.arc_count() {
        if !in_tree[c.amap()[a]] || total.sym(a) < a {
            continue;
        }
        edges += 1;
        let Arc { s, t } = total.arc(a);
        let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
        if rs == rt {
            return Err(Error::NotCovering(format!("tree preimage has a cycle through arc {a}")));
        }
        parent[rs] = rt;
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..total.n() {
        let r = find(&mut parent, v);
        comps.entry(r).or_default().push(v);
    }
    if comps.len() != c.q() || edges != c.q() * tree.len() {
        return Err(Error::NotCovering(format!("tree preimage has {} components, expected {}", comps.len(), c.q())));
    }
    for comp in comps.values() {
        let mut images: Vec<usize> = comp.iter().map(|&v| c.vmap()[v]).collect();
        images.sort_unstable();
        if images != (0..base.n()).collect::<Vec<_>>() {
            return Err(Error::NotCovering("a tree component does not meet every fibre once".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{builtin, dir, UGraph};

    fn d(name: &str) -> SymDigraph {
        builtin(name).unwrap().to_digraph()
    }

    #[test]
    fn p3_minimal_c4_not() {
        let mut b = Budget::unlimited();
        assert_eq!(is_minimal(&d("p3"), &mut b).unwrap().as_bool(), Some(true));
        let m = is_minimal(&d("c4"), &mut b).unwrap();
        assert!(matches!(m.witness().map(|c| c.q()), Some(2) | Some(4)));
    }

    #[test]
    fn g4_bases() {
        let mut b = Budget::unlimited();
        let e = enumerate_bases(&d("h-g4"), BaseSearch::default(), &mut b).unwrap();
        assert!(e.complete);
        assert_eq!(e.bases.len(), 1);
        assert_eq!(e.bases[0].base().n(), 2);
    }

    #[test]
    fn p3_has_no_bases() {
        let mut b = Budget::unlimited();
        assert!(enumerate_bases(&d("p3"), BaseSearch::default(), &mut b).unwrap().bases.is_empty());
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let mut b = Budget::new(3);
        assert!(is_minimal(&d("fig1-total"), &mut b).unwrap().as_bool().is_none());
    }

    #[test]
    fn ported_c4_collapses() {
        let c4 = UGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        // port 1 clockwise everywhere
        let ports = crate::graphs::PortNumbering::from_table(&c4, vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap();
        let dd = dir(&c4, Some(&ports));
        assert!(!is_minimal_ported(&dd).unwrap());
        let c = ported_quotient(&dd).unwrap();
        assert_eq!(c.base().n(), 1);
        assert!(c.report().is_symmetric_covering && c.report().is_port_preserving);
    }

    #[test]
    fn fibre_forest_on_c4() {
        let mut b = Budget::unlimited();
        let c = is_minimal(&d("c4"), &mut b).unwrap().witness().unwrap().clone();
        // any spanning tree of the base: BFS over sym pairs
        let tree = crate::lifts::default_tree(c.base());
        fibre_forest_check(&c, &tree).unwrap();
    }
}
