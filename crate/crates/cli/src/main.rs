//! `anoncover` command-line front end.
//!
//! JSON goes to stdout, a one-line human summary to stderr. Exit codes:
//! 0 success or feasible, 1 negative verdict or error, 2 unknown (budget or
//! step cap), 3 usage error.

mod simulate;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anoncover::coverings::{classify_morphism, enumerate_bases, is_minimal, BaseSearch, Minimality};
use anoncover::feasibility::{
    counterexample_search, spanning_tree_feasible, topology_recognition_feasible, verify_pair, yk_sufficient_condition,
    Decision,
};
use anoncover::graphs::{assign_ports, builtin, builtin_names, load_graph, GraphDoc, PortMode, PortNumbering, UGraph};
use anoncover::lifts::{enumerate_lifts, is_isomorphic, LiftFilter};
use anoncover::{dir, Budget, Error, SymDigraph};
use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "anoncover", version, about = "Coverings, lifts and simulations for anonymous networks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Graph file utilities.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Print the symmetric digraph of a graph.
    Dir {
        graph: String,
        #[command(flatten)]
        ports: PortArgs,
    },
    /// Covering checks and base enumeration.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Reidemeister lifts and isomorphism.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Feasibility verdicts.
    #[command(subcommand)]
    Feasible(FeasibleCmd),
    /// Check the Yamashita-Kameda sufficient condition.
    YkCheck {
        graph: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Search for, or verify, pairs of minimal regular graphs with a common covering.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// Verify a user-supplied pair instead of searching.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        verify: Option<Vec<String>>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run a protocol on a ported network.
    Simulate(simulate::SimArgs),
    /// Run a protocol over many seeds, writing replayable traces.
    Batch(simulate::BatchArgs),
    /// The built-in graph corpus.
    #[command(subcommand)]
    Builtin(BuiltinCmd),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Parse and validate a graph file.
    Validate { graph: String },
}

#[derive(Subcommand)]
enum CoverCmd {
    /// Classify a vertex/arc map between two symmetric digraphs.
    Check {
        #[arg(long)]
        total: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        map: PathBuf,
    },
    /// Enumerate bases of proper symmetric coverings.
    Bases {
        graph: String,
        #[arg(long)]
        max_q: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide minimality.
    Minimal {
        graph: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum LiftCmd {
    /// Enumerate q-sheeted lifts up to isomorphism.
    Enumerate {
        #[arg(long)]
        base: String,
        #[arg(long)]
        sheets: usize,
        #[arg(long)]
        simple: bool,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide isomorphism of two symmetric digraphs.
    Iso { a: String, b: String },
}

#[derive(Subcommand)]
enum FeasibleCmd {
    SpanningTree {
        graph: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    Topology {
        graph: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum BuiltinCmd {
    List,
    Get { name: String },
}

/// Port numbering selection for undirected graphs.
#[derive(Args, Clone, Debug, Default)]
pub struct PortArgs {
    /// `canonical`, `random`, or a graph file carrying ports.
    #[arg(long)]
    pub ports: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub port_seed: u64,
}

pub struct Output {
    pub json: Value,
    pub summary: String,
    pub code: u8,
}

impl Output {
    pub fn new(json: Value, summary: impl Into<String>, code: u8) -> Self {
        Output { json, summary: summary.into(), code }
    }
}

fn budget(b: Option<u64>) -> Budget {
    b.map(Budget::new).unwrap_or_else(Budget::from_env)
}

pub fn load_doc(r: &str) -> anyhow::Result<GraphDoc> {
    if let Some(name) = r.strip_prefix("builtin:") {
        return Ok(builtin(name)?.into_doc());
    }
    let text = fs::read_to_string(r).with_context(|| format!("reading {r}"))?;
    Ok(load_graph(&text)?)
}

pub fn load_digraph(r: &str) -> anyhow::Result<SymDigraph> {
    Ok(load_doc(r)?.to_digraph())
}

/// The undirected graph of a document; simple symmetric digraphs convert.
pub fn load_ugraph(r: &str) -> anyhow::Result<(UGraph, Option<PortNumbering>)> {
    match load_doc(r)? {
        GraphDoc::Undirected { graph, ports } => Ok((graph, ports)),
        GraphDoc::Directed(d) => Ok(d.to_ugraph()?),
    }
}

pub fn resolve_ports(g: &UGraph, file_ports: Option<PortNumbering>, args: &PortArgs) -> anyhow::Result<PortNumbering> {
    Ok(match args.ports.as_deref() {
        None => file_ports.unwrap_or_else(|| assign_ports(g, PortMode::Canonical)),
        Some("canonical") => assign_ports(g, PortMode::Canonical),
        Some("random") => assign_ports(g, PortMode::Random(args.port_seed)),
        Some(path) => {
            let (h, p) = load_ugraph(path)?;
            if h.edges() != g.edges() || h.n() != g.n() {
                bail!("port file {path} describes a different graph");
            }
            p.ok_or_else(|| anyhow!("port file {path} carries no ports"))?
        }
    })
}

fn decision_code(d: Decision) -> u8 {
    match d {
        Decision::Feasible => 0,
        Decision::Infeasible => 1,
        Decision::Unknown => 2,
    }
}

fn exec(cmd: Cmd) -> anyhow::Result<Output> {
    match cmd {
        Cmd::Graph(GraphCmd::Validate { graph }) => Ok(match load_doc(&graph) {
            Ok(doc) => {
                let d = doc.to_digraph();
                let kind = if matches!(doc, GraphDoc::Directed(_)) { "symdigraph" } else { "graph" };
                let j = json!({
                    "valid": true,
                    "kind": kind,
                    "n": d.n(),
                    "arcs": d.arc_count(),
                    "simple": d.is_simple(),
                    "connected": d.is_connected(),
                    "ported": d.outports().is_some(),
                });
                Output::new(j, format!("valid {kind} with {} vertices and {} arcs", d.n(), d.arc_count()), 0)
            }
            Err(e) => Output::new(json!({ "valid": false, "error": e.to_string() }), format!("invalid: {e}"), 1),
        }),
        Cmd::Dir { graph, ports } => {
            let d = match load_doc(&graph)? {
                GraphDoc::Undirected { graph: g, ports: fp } => {
                    let p = if ports.ports.is_some() || fp.is_some() { Some(resolve_ports(&g, fp, &ports)?) } else { None };
                    dir(&g, p.as_ref())
                }
                GraphDoc::Directed(d) => d,
            };
            Ok(Output::new(d.to_json(), format!("{} vertices, {} arcs", d.n(), d.arc_count()), 0))
        }
        Cmd::Cover(CoverCmd::Check { total, base, map }) => {
            let (t, b) = (load_digraph(&total)?, load_digraph(&base)?);
            let m: Value = serde_json::from_str(&fs::read_to_string(&map).with_context(|| format!("reading {}", map.display()))?)?;
            let vmap: Vec<usize> = serde_json::from_value(m.get("vmap").cloned().ok_or_else(|| anyhow!("map lacks vmap"))?)?;
            let amap: Vec<usize> = serde_json::from_value(m.get("amap").cloned().ok_or_else(|| anyhow!("map lacks amap"))?)?;
            let r = classify_morphism(&t, &b, &vmap, &amap)?;
            let code = if r.is_symmetric_covering { 0 } else { 1 };
            let summary = if r.is_symmetric_covering {
                format!("symmetric covering with {} sheets", r.sheets.unwrap_or(0))
            } else {
                format!("not a symmetric covering ({})", r.first_failure())
            };
            Ok(Output::new(serde_json::to_value(&r)?, summary, code))
        }
        Cmd::Cover(CoverCmd::Bases { graph, max_q, budget: b }) => {
            let d = load_digraph(&graph)?;
            let e = enumerate_bases(&d, BaseSearch { max_q }, &mut budget(b))?;
            let bases: Vec<Value> =
                e.bases.iter().map(|c| json!({ "q": c.q(), "base": c.base().to_json(), "map": c.to_json() })).collect();
            let j = json!({ "complete": e.complete, "sheets_searched": e.sheets_searched, "bases": bases });
            let summary = format!("{} bases{}", e.bases.len(), if e.complete { "" } else { " (incomplete)" });
            Ok(Output::new(j, summary, if e.complete { 0 } else { 2 }))
        }
        Cmd::Cover(CoverCmd::Minimal { graph, budget: b }) => {
            let d = load_digraph(&graph)?;
            let m = is_minimal(&d, &mut budget(b))?;
            let witness = m.witness().map(|c| json!({ "q": c.q(), "base": c.base().to_json(), "map": c.to_json() }));
            let (code, summary) = match &m {
                Minimality::Minimal { .. } => (0, "minimal".to_string()),
                Minimality::NotMinimal(c) => (1, format!("not minimal: covers a base with {} vertices", c.base().n())),
                Minimality::Unknown { .. } => (2, "unknown: budget exhausted".to_string()),
            };
            Ok(Output::new(json!({ "minimal": m.as_bool(), "witness": witness }), summary, code))
        }
        Cmd::Lift(LiftCmd::Enumerate { base, sheets, simple, connected, budget: b }) => {
            let d = load_digraph(&base)?;
            let e = enumerate_lifts(&d, sheets, LiftFilter { simple, connected }, None, &mut budget(b))?;
            let arr: Vec<Value> = e.lifts.iter().map(|l| l.total.to_json()).collect();
            let summary = format!(
                "{} classes from {} assignments{}",
                arr.len(),
                e.assignments_tried,
                if e.complete { "" } else { " (incomplete)" }
            );
            Ok(Output::new(Value::Array(arr), summary, if e.complete { 0 } else { 2 }))
        }
        Cmd::Lift(LiftCmd::Iso { a, b }) => {
            let (x, y) = (load_digraph(&a)?, load_digraph(&b)?);
            Ok(match is_isomorphic(&x, &y) {
                Some(iso) => Output::new(json!({ "isomorphic": true, "vmap": iso.vmap, "amap": iso.amap }), "isomorphic", 0),
                None => Output::new(json!({ "isomorphic": false }), "not isomorphic", 1),
            })
        }
        Cmd::Feasible(f) => {
            let (graph, b, which) = match f {
                FeasibleCmd::SpanningTree { graph, budget } => (graph, budget, 0),
                FeasibleCmd::Topology { graph, budget } => (graph, budget, 1),
            };
            let (g, _) = load_ugraph(&graph)?;
            let v = if which == 0 {
                spanning_tree_feasible(&g, &mut budget(b))?
            } else {
                topology_recognition_feasible(&g, &mut budget(b))?
            };
            let summary = format!("{:?} ({})", v.decision, serde_json::to_value(v.reason)?.as_str().unwrap_or(""));
            Ok(Output::new(v.to_json(), summary, decision_code(v.decision)))
        }
        Cmd::YkCheck { graph, budget: b } => {
            let (g, _) = load_ugraph(&graph)?;
            let y = yk_sufficient_condition(&g, &mut budget(b));
            let code = match y.holds {
                Some(true) => 0,
                Some(false) => 1,
                None => 2,
            };
            let j = json!({ "holds": y.holds, "witness": y.witness.as_ref().map(|w| w.to_json(None)) });
            Ok(Output::new(j, format!("condition holds: {:?}", y.holds), code))
        }
        Cmd::Counterexample { degree, max_n, verify, budget: b } => {
            let mut bud = budget(b);
            if let Some(pair) = verify {
                let (a, _) = load_ugraph(&pair[0])?;
                let (c, _) = load_ugraph(&pair[1])?;
                let v = verify_pair(&a, &c, &mut bud)?;
                let code = match v.is_counterexample {
                    Some(true) => 0,
                    Some(false) => 1,
                    None => 2,
                };
                return Ok(Output::new(serde_json::to_value(&v)?, format!("counterexample: {:?}", v.is_counterexample), code));
            }
            let r = counterexample_search(degree, max_n, &mut bud)?;
            let pairs: Vec<Value> = r.pairs.iter().map(|(a, c)| json!([a.to_json(None), c.to_json(None)])).collect();
            let j = json!({ "degree": degree, "max_n": max_n, "complete": r.complete, "pairs": pairs, "sizes": r.sizes });
            let summary = format!("{} pairs{}", pairs.len(), if r.complete { "" } else { " (incomplete)" });
            Ok(Output::new(j, summary, if r.complete { 0 } else { 2 }))
        }
        Cmd::Simulate(args) => simulate::simulate(&args),
        Cmd::Batch(args) => simulate::batch(&args),
        Cmd::Builtin(BuiltinCmd::List) => {
            Ok(Output::new(json!(builtin_names()), format!("{} builtin graphs", builtin_names().len()), 0))
        }
        Cmd::Builtin(BuiltinCmd::Get { name }) => {
            let doc = builtin(&name)?.into_doc();
            let d = doc.to_digraph();
            Ok(Output::new(doc.to_json(), format!("{name}: {} vertices, {} arcs", d.n(), d.arc_count()), 0))
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match exec(cli.cmd) {
        Ok(out) => {
            emit(&serde_json::to_string_pretty(&out.json).expect("json"));
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = if matches!(e.downcast_ref::<Error>(), Some(Error::Budget)) { 2 } else { 1 };
            emit(&json!({ "error": e.to_string() }).to_string());
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
