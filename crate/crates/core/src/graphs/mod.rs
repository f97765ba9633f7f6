//! Graph model: simple undirected communication graphs with port numberings,
//! symmetric digraphs with an arc involution, and the figure corpus.

mod corpus;
mod digraph;
pub mod generate;
mod io;
mod ports;
mod ugraph;

pub use corpus::{builtin, builtin_names, Builtin};
pub use digraph::{Arc, SymDigraph};
pub use io::{load_graph, GraphDoc};
pub use ports::{assign_ports, lift_ports, PortMode, PortNumbering};
pub use ugraph::{GraphMetrics, UGraph};

/// Replaces each edge `{u, v}` by the arcs `u -> v` and `v -> u`.
///
/// Edge `i` (in the graph's sorted edge order, `u < v`) becomes arcs `2i`
/// (`u -> v`) and `2i + 1` (`v -> u`). When `ports` is given, the outport of
/// `u -> v` is `δ_u({u, v})`.
pub fn dir(g: &UGraph, ports: Option<&PortNumbering>) -> SymDigraph {
    let mut arcs = Vec::with_capacity(2 * g.edges().len());
    let mut sym = Vec::with_capacity(2 * g.edges().len());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        arcs.push(Arc { s: u, t: v });
        arcs.push(Arc { s: v, t: u });
        sym.push(2 * i + 1);
        sym.push(2 * i);
    }
    let outports = ports.map(|p| arcs.iter().map(|a| p.port(a.s, a.t).expect("ports validated for g")).collect());
    let mut d = SymDigraph::new(g.n(), arcs, sym, outports).expect("dir of a valid graph is a valid symmetric digraph");
    d.set_name(g.name().map(|s| format!("dir({s})")));
    d
}
