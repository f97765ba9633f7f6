use std::fs;
use std::path::{Path, PathBuf};

use anoncover::graphs::GraphDoc;
use anoncover::protocols::{
    build_quotient_from_mailbox, check_lemma_fundamental, elected, is_spanning_tree, message_bound, spanning_tree_composite,
    topology_composite, tree_edges, Mazurkiewicz, SpanningTreeOutcome, Tarry, TarryRole, TopologyOutcome, TreeElection,
};
use anoncover::simulator::{replay_trace, run, Network, Protocol, RunResult, RunStatus, Scheduler, SimConfig, Trace};
use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{budget, load_doc, resolve_ports, write_file, Output, PortArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolArg {
    Mazurkiewicz,
    ElectionTree,
    Tarry,
    SpanningTree,
    Topology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchedulerArg {
    Random,
    Lockstep,
}

impl SchedulerArg {
    fn core(self) -> Scheduler {
        match self {
            SchedulerArg::Random => Scheduler::Random,
            SchedulerArg::Lockstep => Scheduler::Lockstep,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SchedulerArg::Random)]
    pub scheduler: SchedulerArg,
    #[arg(long, default_value_t = anoncover::simulator::DEFAULT_STEP_CAP)]
    pub step_cap: u64,
    /// Initiator for `tarry`.
    #[arg(long, default_value_t = 0)]
    pub leader: usize,
    /// Lift search budget for `topology`.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Clone, Debug)]
pub struct SimArgs {
    #[arg(long)]
    pub graph: String,
    #[command(flatten)]
    pub ports: PortArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Write the trace as JSON lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Re-execute a recorded trace instead of scheduling.
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct BatchArgs {
    /// Graph references; repeatable.
    #[arg(long = "graph", required = true)]
    pub graphs: Vec<String>,
    /// Seed range `A..B` (exclusive end).
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    /// `canonical` or `random`; random ports use the run seed.
    #[arg(long, default_value = "random")]
    pub port_mode: String,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

fn network(graph: &str, ports: &PortArgs) -> anyhow::Result<Network> {
    Ok(match load_doc(graph)? {
        GraphDoc::Undirected { graph: g, ports: fp } => Network::new(&g, &resolve_ports(&g, fp, ports)?),
        GraphDoc::Directed(d) if d.outports().is_some() && ports.ports.is_none() => Network::from_digraph(d)?,
        GraphDoc::Directed(d) => {
            let (g, fp) = d.to_ugraph()?;
            Network::new(&g, &resolve_ports(&g, fp, ports)?)
        }
    })
}

fn summary_of<S>(r: &RunResult<S>) -> Value {
    json!({ "status": r.status, "steps": r.steps, "messages": r.messages, "trace_hash": r.trace.hash() })
}

fn execute<P: Protocol>(
    net: &Network,
    proto: &P,
    inputs: &[P::Input],
    cfg: &SimConfig,
    replay: Option<&Trace>,
) -> anyhow::Result<RunResult<P::State>> {
    Ok(match replay {
        Some(t) => replay_trace(net, proto, inputs, t)?,
        None => run(net, proto, inputs, cfg)?,
    })
}

fn status_code(s: RunStatus) -> u8 {
    if s == RunStatus::StepCap {
        2
    } else {
        0
    }
}

struct Done {
    out: Output,
    traces: Vec<(&'static str, Trace)>,
}

fn run_job(graph: &str, ports: &PortArgs, a: &RunArgs, replay: Option<&Trace>) -> anyhow::Result<Done> {
    let net = network(graph, ports)?;
    let n = net.n();
    let cfg = SimConfig { seed: a.seed, scheduler: a.scheduler.core(), step_cap: a.step_cap };
    let config = json!({
        "protocol": a.protocol,
        "graph": graph,
        "ports": ports.ports,
        "port_seed": ports.port_seed,
        "seed": a.seed,
        "scheduler": cfg.scheduler,
        "step_cap": a.step_cap,
    });
    if replay.is_some() && matches!(a.protocol, ProtocolArg::SpanningTree | ProtocolArg::Topology) {
        bail!("replay covers single-phase protocols; replay each phase with its own protocol");
    }
    let d = net.digraph();
    match a.protocol {
        ProtocolArg::Mazurkiewicz => {
            let r = execute(&net, &Mazurkiewicz, &vec![(); n], &cfg, replay)?;
            let mut result = json!({ "message_bound": message_bound(&net, r.messages) });
            let mut summary = format!("{:?} after {} steps", r.status, r.steps);
            if r.status == RunStatus::Quiescent {
                let q = build_quotient_from_mailbox(&r.states[0])?;
                result["k"] = json!(q.k);
                result["quotient"] = q.graph.to_json();
                result["lemma_violations"] = json!(check_lemma_fundamental(&net, &r.states));
                summary = format!("quiescent after {} steps; k = {} of n = {n}", r.steps, q.k);
            }
            let out = json!({ "config": config, "run": summary_of(&r), "states": r.states_json(), "result": result });
            Ok(Done { out: Output::new(out, summary, status_code(r.status)), traces: vec![("", r.trace)] })
        }
        ProtocolArg::ElectionTree => {
            if !(d.is_simple() && d.is_connected() && d.arc_count() + 2 == 2 * n) {
                bail!("election-tree runs on trees only");
            }
            let r = execute(&net, &TreeElection, &vec![(); n], &cfg, replay)?;
            let (result, code, summary) = match elected(&net, &r.states) {
                Ok(e) => (serde_json::to_value(&e)?, status_code(r.status), format!("{e:?}")),
                Err(e) => (json!({ "error": e.to_string() }), if r.status == RunStatus::Quiescent { 1 } else { 2 }, e.to_string()),
            };
            let out = json!({ "config": config, "run": summary_of(&r), "states": r.states_json(), "result": result });
            Ok(Done { out: Output::new(out, summary, code), traces: vec![("", r.trace)] })
        }
        ProtocolArg::Tarry => {
            if a.leader >= n {
                bail!("leader {} outside 0..{n}", a.leader);
            }
            let mut roles = vec![TarryRole::Follower; n];
            roles[a.leader] = TarryRole::Leader;
            let r = execute(&net, &Tarry, &roles, &cfg, replay)?;
            let edges = tree_edges(&net, &r.states)?;
            let valid = is_spanning_tree(n, &edges);
            let code = if r.status == RunStatus::StepCap { 2 } else if valid { 0 } else { 1 };
            let out = json!({
                "config": config,
                "run": summary_of(&r),
                "states": r.states_json(),
                "result": { "edges": edges, "spanning_tree": valid },
            });
            Ok(Done { out: Output::new(out, format!("{} tree edges, valid: {valid}", edges.len()), code), traces: vec![("", r.trace)] })
        }
        ProtocolArg::SpanningTree => {
            let r = spanning_tree_composite(&net, &cfg)?;
            let (code, summary) = match &r.outcome {
                SpanningTreeOutcome::Tree { edges, valid, .. } => {
                    (if *valid { 0 } else { 1 }, format!("{} tree edges, valid: {valid}", edges.len()))
                }
                SpanningTreeOutcome::Infeasible { reason, .. } => (1, format!("infeasible: {reason}")),
            };
            let mut out = json!({
                "config": config,
                "run": summary_of(&r.maz),
                "states": r.maz.states_json(),
                "result": r.outcome,
            });
            let mut traces = vec![("", r.maz.trace)];
            if let Some(t) = r.tarry {
                out["traversal"] = json!({ "run": summary_of(&t), "states": t.states_json() });
                traces.push(("tarry", t.trace));
            }
            Ok(Done { out: Output::new(out, summary, code), traces })
        }
        ProtocolArg::Topology => {
            let r = topology_composite(&net, &cfg, &mut budget(a.budget))?;
            let outcomes: Vec<&TopologyOutcome> = r.outcomes.iter().collect();
            let (code, summary) = match r.outcome() {
                Some(TopologyOutcome::Recognized { k, q, .. }) => (0, format!("recognized from a base of {k} vertices, {q} sheets")),
                Some(TopologyOutcome::Ambiguous { classes, .. }) => (1, format!("ambiguous: {} lift classes", classes.len())),
                Some(TopologyOutcome::Indivisible { k, n }) => (1, format!("quotient of {k} vertices does not divide {n}")),
                Some(TopologyOutcome::Unknown { .. }) => (2, "unknown: lift budget exhausted".to_string()),
                None => (1, "processes disagree".to_string()),
            };
            let out = json!({
                "config": config,
                "run": summary_of(&r.maz),
                "states": r.maz.states_json(),
                "result": { "outcomes": outcomes, "vertex_outcome": r.vertex_outcome },
            });
            Ok(Done { out: Output::new(out, summary, code), traces: vec![("", r.maz.trace)] })
        }
    }
}

fn trace_path(base: &Path, suffix: &str) -> PathBuf {
    if suffix.is_empty() {
        base.to_path_buf()
    } else {
        base.with_extension(format!("{suffix}.jsonl"))
    }
}

pub fn simulate(args: &SimArgs) -> anyhow::Result<Output> {
    let replay = match &args.replay {
        Some(p) => Some(Trace::from_jsonl(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?),
        None => None,
    };
    let done = run_job(&args.graph, &args.ports, &args.run, replay.as_ref())?;
    if let Some(path) = &args.trace {
        for (suffix, t) in &done.traces {
            write_file(&trace_path(path, suffix), &t.to_jsonl())?;
        }
    }
    Ok(done.out)
}

fn parse_range(s: &str) -> anyhow::Result<std::ops::Range<u64>> {
    let (a, b) = s.split_once("..").with_context(|| format!("seed range {s:?} is not A..B"))?;
    Ok(a.trim().parse()?..b.trim().parse()?)
}

fn stem(graph: &str) -> String {
    let raw = match graph.strip_prefix("builtin:") {
        Some(n) => n.to_string(),
        None => Path::new(graph).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph".into()),
    };
    raw.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

pub fn batch(args: &BatchArgs) -> anyhow::Result<Output> {
    let seeds = parse_range(&args.seeds)?;
    let random = match args.port_mode.as_str() {
        "random" => true,
        "canonical" => false,
        m => bail!("unknown port mode {m:?}; use canonical or random"),
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut manifest = Vec::new();
    let mut worst = 0u8;
    for graph in &args.graphs {
        for seed in seeds.clone() {
            let ports = PortArgs { ports: Some(if random { "random" } else { "canonical" }.into()), port_seed: seed };
            let run = RunArgs { seed, ..args.run.clone() };
            let done = run_job(graph, &ports, &run, None)?;
            let name = format!("{}-s{seed}", stem(graph));
            let trace = args.out.join(format!("{name}.jsonl"));
            for (suffix, t) in &done.traces {
                write_file(&trace_path(&trace, suffix), &t.to_jsonl())?;
            }
            let result = args.out.join(format!("{name}.json"));
            write_file(&result, &serde_json::to_string_pretty(&done.out.json)?)?;
            worst = worst.max(done.out.code);
            manifest.push(json!({
                "graph": graph,
                "seed": seed,
                "port_mode": args.port_mode,
                "port_seed": seed,
                "trace": trace,
                "result": result,
                "exit": done.out.code,
            }));
        }
    }
    let n = manifest.len();
    Ok(Output::new(Value::Array(manifest), format!("{n} runs written to {}", args.out.display()), worst))
}
