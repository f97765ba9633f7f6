//! Built-in graphs transcribed from the figures, plus a few small classics.
//!
//! Vertex letters map to ids alphabetically (`a = 0`, `b = 1`, ...). For the
//! 15-vertex total graph `fig1-total`, copy `s` of letter `x` has id
//! `5 * s + x`. In `fig4-nonsym` the hub is 0, the arm vertices are 1..=3 and
//! gadget `i` occupies ids `4 + 4i ..= 7 + 4i`.
//!
//! Hierarchy drawings follow the loop convention: a drawn loop is one
//! self-symmetric loop arc, a drawn edge is a sym-paired pair of arcs.

use crate::error::{Error, Result};
use crate::graphs::{GraphDoc, SymDigraph, UGraph};

/// A corpus entry: undirected simple graph or symmetric digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Undirected(UGraph),
    Directed(SymDigraph),
}

impl Builtin {
    pub fn to_digraph(&self) -> SymDigraph {
        match self {
            Builtin::Undirected(g) => crate::graphs::dir(g, None),
            Builtin::Directed(d) => d.clone(),
        }
    }

    /// The undirected graph, if this entry is one.
    pub fn ugraph(&self) -> Option<&UGraph> {
        match self {
            Builtin::Undirected(g) => Some(g),
            Builtin::Directed(_) => None,
        }
    }

    pub fn into_doc(self) -> GraphDoc {
        match self {
            Builtin::Undirected(graph) => GraphDoc::Undirected { graph, ports: None },
            Builtin::Directed(d) => GraphDoc::Directed(d),
        }
    }
}

const NAMES: &[&str] = &[
    "k2",
    "p3",
    "p4",
    "c4",
    "c6",
    "k4",
    "k33",
    "prism",
    "star3",
    "fig1-base",
    "fig1-total",
    "fig4-nonsym",
    "fig4-bouquet",
    "fig4-bouquet-ss",
    "arete-h",
    "arete-h2",
    "h-g1",
    "h-g2",
    "h-g3",
    "h-g4",
    "h-g5",
    "h-g6",
    "h-g7",
];

pub fn builtin_names() -> &'static [&'static str] {
    NAMES
}

fn simple(name: &str, n: usize, edges: &[(usize, usize)]) -> Result<Builtin> {
    Ok(Builtin::Undirected(UGraph::new(n, edges.iter().copied())?.with_name(name)))
}

fn multi(name: &str, n: usize, edges: &[(usize, usize)], self_loops: &[usize], loop_pairs: &[usize]) -> Result<Builtin> {
    Ok(Builtin::Directed(SymDigraph::from_multigraph(n, edges, self_loops, loop_pairs)?.with_name(name)))
}

pub fn builtin(name: &str) -> Result<Builtin> {
    match name {
        "k2" => simple(name, 2, &[(0, 1)]),
        "p3" => simple(name, 3, &[(0, 1), (1, 2)]),
        "p4" => simple(name, 4, &[(0, 1), (1, 2), (2, 3)]),
        "c4" => simple(name, 4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
        "c6" => simple(name, 6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]),
        "k4" => simple(name, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        "k33" => simple(name, 6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]),
        "prism" => simple(name, 6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]),
        "star3" => simple(name, 4, &[(0, 1), (0, 2), (0, 3)]),
        // a b c d e; plain edges a-b a-c c-d c-e form the drawn spanning tree.
        "fig1-base" => simple(name, 5, &[(0, 1), (0, 2), (2, 3), (2, 4), (1, 3), (3, 4)]),
        "fig1-total" => {
            let id = |sheet: usize, letter: usize| 5 * sheet + letter;
            let (a, b, c, d, e) = (0, 1, 2, 3, 4);
            let mut edges = Vec::new();
            for s in 0..3 {
                edges.extend([(id(s, a), id(s, b)), (id(s, a), id(s, c)), (id(s, c), id(s, d)), (id(s, c), id(s, e))]);
            }
            // dashed edges of the drawing
            edges.extend([
                (id(0, b), id(1, d)),
                (id(0, d), id(1, b)),
                (id(2, b), id(2, d)),
                (id(1, e), id(2, d)),
                (id(1, d), id(2, e)),
                (id(0, d), id(0, e)),
            ]);
            simple(name, 15, &edges)
        }
        "fig4-nonsym" => {
            let mut edges = Vec::new();
            for i in 0..3 {
                let arm = 1 + i;
                let (x1, x2, x3, x4) = (4 + 4 * i, 5 + 4 * i, 6 + 4 * i, 7 + 4 * i);
                edges.extend([(0, arm), (arm, x3), (arm, x4), (x1, x2), (x3, x1), (x4, x1), (x3, x2), (x4, x2)]);
            }
            simple(name, 16, &edges)
        }
        "fig4-bouquet" => multi(name, 1, &[], &[0], &[0]),
        "fig4-bouquet-ss" => multi(name, 1, &[], &[0, 0, 0], &[]),
        "arete-h" => multi(name, 1, &[], &[0], &[]),
        "arete-h2" => multi(name, 1, &[], &[], &[0]),
        // loop vertex a, plain vertex b, two parallel edges a-b
        "h-g1" => multi(name, 2, &[(0, 1), (0, 1)], &[0], &[]),
        // 4-cycle a-b-d-c-a with loops on a and d
        "h-g2" => multi(name, 4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[0, 3], &[]),
        // a-c, double a-b, double c-d
        "h-g3" => multi(name, 4, &[(0, 1), (0, 1), (0, 2), (2, 3), (2, 3)], &[], &[]),
        // K4 minus {b, c}
        "h-g4" => simple(name, 4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]),
        "h-g5" => simple(name, 8, &[(0, 2), (4, 6), (0, 6), (1, 3), (3, 5), (5, 7), (0, 1), (2, 5), (3, 4), (6, 7)]),
        "h-g6" => simple(name, 8, &[(0, 2), (4, 6), (1, 3), (5, 7), (0, 1), (2, 3), (4, 5), (6, 7), (0, 4), (3, 7)]),
        "h-g7" => simple(name, 8, &[(0, 2), (2, 4), (4, 6), (1, 3), (3, 5), (5, 7), (0, 1), (0, 3), (4, 7), (6, 7)]),
        _ => Err(Error::UnknownBuiltin { name: name.to_owned(), valid: NAMES.iter().map(|s| s.to_string()).collect() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in builtin_names() {
            let b = builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(b.to_digraph().is_connected(), "{name}");
        }
    }

    #[test]
    fn unknown_lists_names() {
        let err = builtin("nope").unwrap_err();
        assert!(err.to_string().contains("h-g4"));
    }

    #[test]
    fn figure_sizes() {
        let base = builtin("fig1-base").unwrap();
        let g = base.ugraph().unwrap();
        assert_eq!((g.n(), g.m()), (5, 6));
        let g4 = builtin("h-g4").unwrap();
        let g4 = g4.ugraph().unwrap();
        assert_eq!((g4.n(), g4.m()), (4, 5));
        let f4 = builtin("fig4-nonsym").unwrap();
        let f4 = f4.ugraph().unwrap();
        assert_eq!((f4.n(), f4.regular_degree()), (16, Some(3)));
        assert_eq!(builtin("h-g1").unwrap().to_digraph().arc_count(), 5);
        assert_eq!(builtin("h-g3").unwrap().to_digraph().arc_count(), 10);
        assert_eq!(builtin("h-g2").unwrap().to_digraph().arc_count(), 10);
        let total = builtin("fig1-total").unwrap();
        assert_eq!(total.ugraph().unwrap().m(), 18);
    }

    #[test]
    fn fig4_hub_removal_leaves_three_odd_components() {
        let g = builtin("fig4-nonsym").unwrap().ugraph().unwrap().clone();
        // components of g - hub
        let mut comp = vec![usize::MAX; g.n()];
        let mut sizes = Vec::new();
        for s in 1..g.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut size = 0;
            while let Some(u) = stack.pop() {
                size += 1;
                for &v in g.neighbors(u) {
                    if v != 0 && comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            sizes.push(size);
        }
        assert_eq!(sizes, vec![5, 5, 5]);
        assert!(!g.has_perfect_matching());
    }
}
