use serde::Serialize;

use crate::budget::Budget;
use crate::coverings::{is_minimal, Minimality};
use crate::error::Result;
use crate::graphs::generate::regular_graphs;
use crate::graphs::{dir, UGraph};
use crate::lifts::is_isomorphic;

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub n: usize,
    pub graphs: usize,
    /// Graphs discarded because a perfect matching (odd degree) or a
    /// 2-factorization (even degree) yields a one-vertex base.
    pub single_vertex_base: usize,
    pub minimal: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub pairs: Vec<(UGraph, UGraph)>,
    pub sizes: Vec<SizeReport>,
    /// False if generation or some minimality check ran out of budget.
    pub complete: bool,
}

/// Pairs of connected `d`-regular graphs of equal order `n <= n_max`, not
/// isomorphic, both minimal for symmetric coverings. Being regular of the
/// same degree they share a finite covering, yet each is recognizable.
pub fn counterexample_search(d: usize, n_max: usize, budget: &mut Budget) -> Result<CounterexampleReport> {
    let mut pairs = Vec::new();
    let mut sizes = Vec::new();
    let mut complete = true;
    for n in d + 1..=n_max {
        if (n * d) % 2 != 0 {
            continue;
        }
        let Ok(graphs) = regular_graphs(d, n, budget) else {
            complete = false;
            break;
        };
        let mut report = SizeReport { n, graphs: graphs.len(), single_vertex_base: 0, minimal: 0, unknown: 0 };
        let mut minimal = Vec::new();
        for g in graphs {
            if d % 2 == 0 || g.has_perfect_matching() {
                report.single_vertex_base += 1;
                continue;
            }
            match is_minimal(&dir(&g, None), budget)? {
                Minimality::Minimal { .. } => minimal.push(g),
                Minimality::NotMinimal(_) => {}
                Minimality::Unknown { .. } => {
                    report.unknown += 1;
                    complete = false;
                }
            }
        }
        report.minimal = minimal.len();
        for i in 0..minimal.len() {
            for j in i + 1..minimal.len() {
                pairs.push((minimal[i].clone(), minimal[j].clone()));
            }
        }
        sizes.push(report);
    }
    Ok(CounterexampleReport { pairs, sizes, complete })
}

/// Orders of possible bases of a graph on `n` vertices: proper divisors of `n`.
pub fn base_sizes(n: usize) -> Vec<usize> {
    (1..n).filter(|k| n % k == 0).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairVerification {
    pub n: usize,
    pub degree: Option<usize>,
    pub non_isomorphic: bool,
    /// Equal degree refinements, i.e. a common finite covering exists.
    pub common_covering: bool,
    pub a_minimal: Option<bool>,
    pub b_minimal: Option<bool>,
    /// Base orders whose partition search completed, per graph.
    pub a_base_sizes_searched: Vec<usize>,
    pub b_base_sizes_searched: Vec<usize>,
    pub base_sizes: Vec<usize>,
    /// `Some(true)` when the pair defeats the sufficient condition while both graphs are recognizable.
    pub is_counterexample: Option<bool>,
}

fn searched_sizes(n: usize, m: &Minimality) -> Vec<usize> {
    let qs: &[usize] = match m {
        Minimality::Minimal { sheets_searched } | Minimality::Unknown { sheets_searched } => sheets_searched,
        Minimality::NotMinimal(_) => &[],
    };
    let mut s: Vec<usize> = qs.iter().map(|q| n / q).collect();
    s.sort_unstable();
    s
}

/// Runs the full property check on a user-supplied pair.
pub fn verify_pair(a: &UGraph, b: &UGraph, budget: &mut Budget) -> Result<PairVerification> {
    let n = a.n();
    let degree = match (a.regular_degree(), b.regular_degree()) {
        (Some(x), Some(y)) if x == y => Some(x),
        _ => None,
    };
    let da = dir(a, None);
    let db = dir(b, None);
    let non_isomorphic = a.n() != b.n() || is_isomorphic(&da, &db).is_none();
    let common_covering = if degree.is_some() && a.n() == b.n() {
        true
    } else {
        // equal order and equal refinement: `b` realizes `a`'s refinement
        a.n() == b.n() && same_refinement(a, b)
    };
    let ma = is_minimal(&da, budget)?;
    let mb = is_minimal(&db, budget)?;
    let a_minimal = ma.as_bool();
    let b_minimal = mb.as_bool();
    let is_counterexample = match (a_minimal, b_minimal) {
        (Some(x), Some(y)) => Some(x && y && non_isomorphic && common_covering),
        (Some(false), _) | (_, Some(false)) => Some(false),
        _ => None,
    };
    Ok(PairVerification {
        n,
        degree,
        non_isomorphic,
        common_covering,
        a_minimal,
        b_minimal,
        a_base_sizes_searched: searched_sizes(n, &ma),
        b_base_sizes_searched: searched_sizes(n, &mb),
        base_sizes: base_sizes(n),
        is_counterexample,
    })
}

fn same_refinement(a: &UGraph, b: &UGraph) -> bool {
    // joint refinement over the disjoint union: each class meets both graphs equally
    let n = a.n();
    let mut edges: Vec<(usize, usize)> = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(u, v)| (u + n, v + n)));
    let mut adj = vec![Vec::new(); 2 * n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color: Vec<usize> = adj.iter().map(|l| l.len()).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..2 * n)
            .map(|v| {
                let mut s: Vec<usize> = adj[v].iter().map(|&w| color[w]).collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let mut sorted: Vec<_> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| sorted.binary_search(&s).expect("present")).collect();
        let stable = count(&next) == count(&color);
        color = next;
        if stable {
            break;
        }
    }
    let mut left = vec![0usize; 2 * n];
    let mut right = vec![0usize; 2 * n];
    for v in 0..n {
        left[color[v]] += 1;
        right[color[v + n]] += 1;
    }
    left == right
}

fn count(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::builtin;

    #[test]
    fn cubic_up_to_eight_is_empty() {
        let mut b = Budget::unlimited();
        let r = counterexample_search(3, 8, &mut b).unwrap();
        assert!(r.complete);
        assert!(r.pairs.is_empty());
        assert_eq!(r.sizes.iter().map(|s| s.graphs).collect::<Vec<_>>(), vec![1, 2, 5]);
    }

    #[test]
    fn divisors_of_28() {
        assert_eq!(base_sizes(28), vec![1, 2, 4, 7, 14]);
    }

    #[test]
    fn prism_k33_pair_is_not_a_counterexample() {
        let mut b = Budget::unlimited();
        let a = builtin("prism").unwrap().ugraph().unwrap().clone();
        let c = builtin("k33").unwrap().ugraph().unwrap().clone();
        let v = verify_pair(&a, &c, &mut b).unwrap();
        assert!(v.non_isomorphic && v.common_covering);
        assert_eq!(v.is_counterexample, Some(false));
    }
}
