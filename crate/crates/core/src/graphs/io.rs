use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{dir, Arc, PortNumbering, SymDigraph, UGraph};

/// A parsed graph file: either an undirected graph (optionally ported) or a
/// symmetric digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDoc {
    Undirected { graph: UGraph, ports: Option<PortNumbering> },
    Directed(SymDigraph),
}

#[derive(Serialize, Deserialize)]
struct UGraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ports: Option<Vec<[usize; 3]>>,
}

#[derive(Serialize, Deserialize)]
struct ArcRecord {
    id: usize,
    s: usize,
    t: usize,
    sym: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outport: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct SymDigraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    n: usize,
    arcs: Vec<ArcRecord>,
}

/// Parses either JSON graph format; the presence of `"arcs"` selects the
/// symmetric-digraph format.
pub fn load_graph(text: &str) -> Result<GraphDoc> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("arcs").is_some() {
        let file: SymDigraphFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(GraphDoc::Directed(digraph_from_file(file)?))
    } else {
        let file: UGraphFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        let mut graph = UGraph::new(file.n, file.edges.iter().map(|e| (e[0], e[1])))?;
        if let Some(name) = file.name {
            graph = graph.with_name(name);
        }
        let ports = match file.ports {
            None => None,
            Some(t) => Some(PortNumbering::from_triples(&graph, &t.iter().map(|x| (x[0], x[1], x[2])).collect::<Vec<_>>())?),
        };
        Ok(GraphDoc::Undirected { graph, ports })
    }
}

fn digraph_from_file(file: SymDigraphFile) -> Result<SymDigraph> {
    let m = file.arcs.len();
    let mut slots: Vec<Option<&ArcRecord>> = vec![None; m];
    for rec in &file.arcs {
        if rec.id >= m {
            return Err(Error::InvalidGraph(format!("arc id {} outside 0..{m}", rec.id)));
        }
        if slots[rec.id].replace(rec).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate arc id {}", rec.id)));
        }
    }
    let recs: Vec<&ArcRecord> = slots.into_iter().map(|r| r.expect("ids are a permutation")).collect();
    let arcs = recs.iter().map(|r| Arc { s: r.s, t: r.t }).collect();
    let sym = recs.iter().map(|r| r.sym).collect();
    let outports = if recs.iter().all(|r| r.outport.is_some()) && m > 0 {
        Some(recs.iter().map(|r| r.outport.unwrap()).collect())
    } else if recs.iter().any(|r| r.outport.is_some()) {
        return Err(Error::InvalidGraph("outport given for some arcs but not all".into()));
    } else {
        None
    };
    let mut d = SymDigraph::new(file.n, arcs, sym, outports)?;
    d.set_name(file.name);
    Ok(d)
}

impl GraphDoc {
    /// The symmetric digraph this document describes (`dir` for undirected graphs).
    pub fn to_digraph(&self) -> SymDigraph {
        match self {
            GraphDoc::Undirected { graph, ports } => dir(graph, ports.as_ref()),
            GraphDoc::Directed(d) => d.clone(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            GraphDoc::Undirected { graph, .. } => graph.name(),
            GraphDoc::Directed(d) => d.name(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            GraphDoc::Undirected { graph, ports } => graph.to_json(ports.as_ref()),
            GraphDoc::Directed(d) => d.to_json(),
        }
    }
}

impl UGraph {
    pub fn to_json(&self, ports: Option<&PortNumbering>) -> serde_json::Value {
        let file = UGraphFile {
            name: self.name().map(str::to_owned),
            n: self.n(),
            edges: self.edges().iter().map(|&(u, v)| [u, v]).collect(),
            ports: ports.map(|p| p.triples().into_iter().map(|(u, v, q)| [u, v, q]).collect()),
        };
        serde_json::to_value(file).expect("graph serializes")
    }
}

impl SymDigraph {
    pub fn to_json(&self) -> serde_json::Value {
        let file = SymDigraphFile {
            name: self.name().map(str::to_owned),
            n: self.n(),
            arcs: self
                .arcs()
                .iter()
                .enumerate()
                .map(|(id, a)| ArcRecord { id, s: a.s, t: a.t, sym: self.sym(id), outport: self.outport(id) })
                .collect(),
        };
        serde_json::to_value(file).expect("digraph serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SymDigraph> {
        let file: SymDigraphFile = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        digraph_from_file(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k2() {
        let doc = load_graph(r#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        match doc {
            GraphDoc::Undirected { graph, ports } => {
                assert_eq!(graph.edges(), &[(0, 1)]);
                assert!(ports.is_none());
            }
            _ => panic!("expected undirected"),
        }
    }

    #[test]
    fn duplicate_edge_error() {
        let err = load_graph(r#"{"n":3,"edges":[[0,1],[0,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate edge"));
    }

    #[test]
    fn bad_ports_error_names_vertex() {
        let err = load_graph(r#"{"n":2,"edges":[[0,1]],"ports":[[0,1,1],[1,0,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("vertex 1"), "{err}");
    }

    #[test]
    fn parse_failure() {
        assert!(matches!(load_graph("{nope"), Err(Error::Parse(_))));
    }

    #[test]
    fn digraph_round_trip_unordered_ids() {
        let text = r#"{"n":1,"arcs":[{"id":1,"s":0,"t":0,"sym":0,"outport":2},{"id":0,"s":0,"t":0,"sym":1,"outport":1}]}"#;
        let d = match load_graph(text).unwrap() {
            GraphDoc::Directed(d) => d,
            _ => panic!(),
        };
        assert_eq!(d.outport(1), Some(2));
        let back = SymDigraph::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
}

impl serde::Serialize for SymDigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
