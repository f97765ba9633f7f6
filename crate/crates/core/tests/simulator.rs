use std::collections::HashMap;

use anoncover::graphs::{assign_ports, builtin, PortMode, SymDigraph, UGraph};
use anoncover::lifts::{parse_cycles, reidemeister_lift, PermAssignment};
use anoncover::protocols::{Mazurkiewicz, TreeElection};
use anoncover::simulator::{
    lockstep_lifted_run, replay_trace, run, Event, EventKind, Network, Outbox, Protocol, RunStatus, SimConfig, Simulation,
    Trace,
};
use anoncover::{CoveringMap, Error};

fn ugraph(name: &str) -> UGraph {
    builtin(name).unwrap().ugraph().unwrap().clone()
}

fn net(name: &str, seed: u64) -> Network {
    let g = ugraph(name);
    Network::new(&g, &assign_ports(&g, PortMode::Random(seed)))
}

fn numbers(states: &[anoncover::protocols::MazState]) -> Vec<u32> {
    states.iter().map(|s| s.n).collect()
}

#[test]
fn maz_k2_simultaneous_wakeups_give_one_number() {
    let r = run(&net("k2", 0), &Mazurkiewicz, &[(), ()], &SimConfig::lockstep()).unwrap();
    assert_eq!(r.status, RunStatus::Quiescent);
    assert_eq!(numbers(&r.states), vec![1, 1]);
}

#[test]
fn maz_k2_sequential_schedule_gives_two_numbers() {
    let n = net("k2", 0);
    let mut sim = Simulation::new(&n, &Mazurkiewicz, &[(), ()]).unwrap();
    sim.execute(Event::Wakeup(1)).unwrap();
    sim.execute(Event::Deliver(1)).unwrap();
    sim.execute(Event::Wakeup(0)).unwrap();
    while let Some(&ev) = sim.enabled().first() {
        sim.execute(ev).unwrap();
    }
    let mut got = numbers(sim.states());
    got.sort();
    assert_eq!(got, vec![1, 2]);
}

#[test]
fn identical_configs_give_identical_traces() {
    let names = ["k2", "p3", "p4", "c4", "c6", "k4", "k33", "prism", "star3", "h-g4"];
    for (i, name) in names.iter().enumerate() {
        for seed in [i as u64, 100 + i as u64] {
            let n = net(name, seed);
            let inputs = vec![(); n.n()];
            let a = run(&n, &Mazurkiewicz, &inputs, &SimConfig::random(seed)).unwrap();
            let b = run(&n, &Mazurkiewicz, &inputs, &SimConfig::random(seed)).unwrap();
            assert_eq!(a.trace.hash(), b.trace.hash(), "{name} seed {seed}");
            assert_eq!(a.states, b.states);
        }
    }
}

/// Channel key `(sender, outport)` for sends, and the same key recovered
/// from the receiving side for deliveries.
fn fifo_holds(n: &Network, t: &Trace) -> bool {
    let d = n.digraph();
    let mut sent: HashMap<usize, Vec<&str>> = HashMap::new();
    let mut got: HashMap<usize, Vec<&str>> = HashMap::new();
    for e in t.events() {
        let dg = e.digest.as_deref();
        match e.kind {
            EventKind::Send => sent.entry(n.arc_at(e.vertex, e.port.unwrap()).unwrap()).or_default().push(dg.unwrap()),
            EventKind::Deliver => got.entry(n.arc_into(e.vertex, e.port.unwrap()).unwrap()).or_default().push(dg.unwrap()),
            _ => {}
        }
    }
    (0..d.arc_count()).all(|a| sent.get(&a).cloned().unwrap_or_default() == got.get(&a).cloned().unwrap_or_default())
}

#[test]
fn fifo_and_reliability_in_every_trace() {
    for seed in 0..10 {
        for name in ["c6", "prism", "h-g6"] {
            let n = net(name, seed);
            let r = run(&n, &Mazurkiewicz, &vec![(); n.n()], &SimConfig::random(seed)).unwrap();
            assert_eq!(r.status, RunStatus::Quiescent);
            assert!(fifo_holds(&n, &r.trace), "{name} seed {seed}");
        }
    }
}

#[test]
fn replay_reproduces_final_states() {
    let n = net("prism", 3);
    let inputs = vec![(); n.n()];
    let r = run(&n, &Mazurkiewicz, &inputs, &SimConfig::random(9)).unwrap();
    let text = r.trace.to_jsonl();
    let back = replay_trace(&n, &Mazurkiewicz, &inputs, &Trace::from_jsonl(&text).unwrap()).unwrap();
    assert_eq!(back.states, r.states);
    assert_eq!(back.status, RunStatus::Quiescent);
    assert_eq!(back.trace, r.trace);
}

#[test]
fn truncated_replay_matches_prefix() {
    let n = net("c6", 1);
    let inputs = vec![(); n.n()];
    let cfg = SimConfig::random(4);
    let full = run(&n, &Mazurkiewicz, &inputs, &cfg).unwrap();
    let cut = full.steps / 2;
    let short = run(&n, &Mazurkiewicz, &inputs, &SimConfig { step_cap: cut, ..cfg }).unwrap();
    assert_eq!(short.status, RunStatus::StepCap);
    let back = replay_trace(&n, &Mazurkiewicz, &inputs, &full.trace.truncate_steps(cut)).unwrap();
    assert_eq!(back.status, RunStatus::Prefix);
    assert_eq!(back.states, short.states);
}

#[test]
fn tampered_delivery_order_is_rejected() {
    let n = net("c4", 2);
    let inputs = vec![(); n.n()];
    let r = run(&n, &Mazurkiewicz, &inputs, &SimConfig::random(5)).unwrap();
    let mut ev = r.trace.events().to_vec();
    // Swap the first two deliveries on one channel.
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pair = None;
    for (i, e) in ev.iter().enumerate() {
        if e.kind == EventKind::Deliver {
            if let Some(&j) = seen.get(&(e.vertex, e.port.unwrap())) {
                if ev[j].digest != e.digest {
                    pair = Some((j, i));
                    break;
                }
            }
            seen.insert((e.vertex, e.port.unwrap()), i);
        }
    }
    let (j, i) = pair.expect("a channel carries two distinct messages");
    let (dj, di) = (ev[j].digest.clone(), ev[i].digest.clone());
    ev[j].digest = di;
    ev[i].digest = dj;
    let err = replay_trace(&n, &Mazurkiewicz, &inputs, &Trace::new(ev)).unwrap_err();
    assert!(matches!(err, Error::Replay { .. }), "{err}");
}

struct PingPong;

impl Protocol for PingPong {
    type Input = ();
    type State = u64;
    type Msg = u64;

    fn init(&self, _: usize, _: &()) -> u64 {
        0
    }

    fn on_wakeup(&self, s: &mut u64, out: &mut Outbox<u64>) {
        out.send(1, *s);
    }

    fn on_receive(&self, s: &mut u64, _: usize, m: &u64, out: &mut Outbox<u64>) {
        *s = m + 1;
        out.send(1, *s);
    }
}

#[test]
fn runaway_protocol_hits_step_cap() {
    let n = net("k2", 0);
    let r = run(&n, &PingPong, &[(), ()], &SimConfig { step_cap: 500, ..SimConfig::random(1) }).unwrap();
    assert_eq!(r.status, RunStatus::StepCap);
    assert_eq!(r.steps, 500);
}

fn ported(name: &str) -> SymDigraph {
    builtin(name).unwrap().to_digraph().with_canonical_outports()
}

#[test]
fn lifted_run_on_g4_over_g1_is_fibre_uniform() {
    let base = ported("h-g1");
    let sigma = [(0, parse_cycles(2, "(12)").unwrap()), (3, parse_cycles(2, "(12)").unwrap())];
    let pa = PermAssignment::new(&base, 2, vec![1], sigma).unwrap();
    let cover = reidemeister_lift(&base, &pa).unwrap();
    let total = Network::from_digraph(cover.total().clone()).unwrap();
    let bnet = Network::from_digraph(base).unwrap();
    for cfg in [SimConfig::lockstep(), SimConfig::random(3), SimConfig::random(8)] {
        let r = lockstep_lifted_run(&total, &bnet, &cover, &Mazurkiewicz, &[(), ()], &cfg).unwrap();
        assert_eq!(r.violation, None);
        let mut ids: Vec<u32> = r.total.states.iter().map(|s| s.n).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids, vec![1, 2]);
    }
}

#[test]
fn lifted_run_on_c4_over_bouquet_keeps_all_identical() {
    let base = ported("arete-h2");
    let sigma = [(0, parse_cycles(4, "(1234)").unwrap())];
    let pa = PermAssignment::new(&base, 4, vec![], sigma).unwrap();
    let cover = reidemeister_lift(&base, &pa).unwrap();
    assert!(anoncover::is_isomorphic(cover.total(), &builtin("c4").unwrap().to_digraph()).is_some());
    let total = Network::from_digraph(cover.total().clone()).unwrap();
    let bnet = Network::from_digraph(base).unwrap();
    let r = lockstep_lifted_run(&total, &bnet, &cover, &TreeElection, &[()], &SimConfig::random(2));
    // Election on a cycle is outside its domain but still exercises mirroring.
    assert!(r.unwrap().violation.is_none());
    let r = lockstep_lifted_run(&total, &bnet, &cover, &Mazurkiewicz, &[()], &SimConfig::random(2)).unwrap();
    assert!(r.violation.is_none());
    assert!(r.total.states.iter().all(|s| s == &r.total.states[0]));
}

#[test]
fn identity_lifted_run_gives_identical_traces() {
    let g = ugraph("prism");
    let d = anoncover::dir(&g, Some(&assign_ports(&g, PortMode::Random(4))));
    let id = CoveringMap::identity(&d);
    let n = Network::from_digraph(d).unwrap();
    let r = lockstep_lifted_run(&n, &n, &id, &Mazurkiewicz, &vec![(); 6], &SimConfig::random(11)).unwrap();
    assert!(r.violation.is_none());
    assert_eq!(r.base.trace, r.total.trace);
}

#[test]
fn lifted_run_rejects_non_port_preserving_maps() {
    let base = ported("h-g1");
    let sigma = [(0, parse_cycles(2, "(12)").unwrap()), (3, parse_cycles(2, "(12)").unwrap())];
    let pa = PermAssignment::new(&base, 2, vec![1], sigma).unwrap();
    let cover = reidemeister_lift(&base, &pa).unwrap();
    let t = cover.total().clone();
    let mut ports = t.outports().unwrap().to_vec();
    let (a, b) = (t.out_arcs(0)[0], t.out_arcs(0)[1]);
    ports.swap(a, b);
    let scrambled = t.with_outports(ports).unwrap();
    let total = Network::from_digraph(scrambled.clone()).unwrap();
    let cover = cover.with_total(scrambled).unwrap();
    let bnet = Network::from_digraph(base).unwrap();
    let r = lockstep_lifted_run(&total, &bnet, &cover, &Mazurkiewicz, &[(), ()], &SimConfig::lockstep());
    assert!(matches!(r, Err(Error::NotCovering(_))));
}
