use anoncover::coverings::classify_morphism;
use anoncover::graphs::generate::{random_connected_graph, random_tree};
use anoncover::graphs::{assign_ports, builtin, PortMode, SymDigraph, UGraph};
use anoncover::lifts::{enumerate_lifts, is_isomorphic, parse_cycles, reidemeister_lift, LiftFilter, PermAssignment};
use anoncover::protocols::*;
use anoncover::simulator::{run, Event, Network, RunStatus, SimConfig, Simulation};
use anoncover::{dir, Budget};
use proptest::prelude::*;

fn ugraph(name: &str) -> UGraph {
    builtin(name).unwrap().ugraph().unwrap().clone()
}

fn ported_net(g: &UGraph, seed: u64) -> Network {
    Network::new(g, &assign_ports(g, PortMode::Random(seed)))
}

fn role_net(name: &str) -> Network {
    let g = ugraph(name);
    Network::new(&g, &assign_ports(&g, PortMode::Canonical))
}

#[test]
fn election_on_p2_gives_co_leaders_when_tokens_cross() {
    let n = role_net("k2");
    let r = run(&n, &TreeElection, &[(), ()], &SimConfig::lockstep()).unwrap();
    assert!(matches!(elected(&n, &r.states).unwrap(), Elected::CoLeaders { .. }));
    // A token buffered before wakeup makes its receiver the leader.
    let mut sim = Simulation::new(&n, &TreeElection, &[(), ()]).unwrap();
    sim.execute(Event::Wakeup(0)).unwrap();
    sim.execute(Event::Deliver(0)).unwrap();
    sim.execute(Event::Wakeup(1)).unwrap();
    assert_eq!(elected(&n, sim.states()).unwrap(), Elected::Leader { vertex: 1 });
}

#[test]
fn election_on_p3_leaves_first_elects_center() {
    let n = role_net("p3");
    let center = (0..3).find(|&v| n.degree(v) == 2).unwrap();
    let mut sim = Simulation::new(&n, &TreeElection, &[(), (), ()]).unwrap();
    for v in (0..3).filter(|&v| v != center) {
        sim.execute(Event::Wakeup(v)).unwrap();
    }
    while let Some(&ev) = sim.enabled().iter().find(|e| matches!(e, Event::Deliver(_))) {
        sim.execute(ev).unwrap();
    }
    sim.execute(Event::Wakeup(center)).unwrap();
    assert_eq!(elected(&n, sim.states()).unwrap(), Elected::Leader { vertex: center });
}

#[test]
fn election_on_star_is_leader_or_adjacent_pair() {
    let n = role_net("star3");
    let (mut center, mut other) = (0, 0);
    for seed in 0..100 {
        let r = run(&n, &TreeElection, &[(); 4], &SimConfig::random(seed)).unwrap();
        match elected(&n, &r.states).unwrap() {
            Elected::Leader { vertex } if n.degree(vertex) == 3 => center += 1,
            _ => other += 1,
        }
    }
    assert!(center > 0 && other > 0);
}

fn tarry_edges(name: &str, roles: &[TarryRole]) -> Vec<(usize, usize)> {
    let n = role_net(name);
    let r = run(&n, &Tarry, roles, &SimConfig::random(1)).unwrap();
    assert!(r.states.iter().all(|s| s.done));
    tree_edges(&n, &r.states).unwrap()
}

#[test]
fn tarry_examples() {
    use TarryRole::*;
    let n = role_net("p3");
    let center = (0..3).find(|&v| n.degree(v) == 2).unwrap();
    let mut roles = vec![Follower; 3];
    roles[center] = Leader;
    assert_eq!(tarry_edges("p3", &roles).len(), 2);

    let r = run(&role_net("c4"), &Tarry, &[Leader, Follower, Follower, Follower], &SimConfig::random(5)).unwrap();
    let e = tree_edges(&role_net("c4"), &r.states).unwrap();
    assert!(is_spanning_tree(4, &e) && e.len() == 3);
    assert!(r.states.iter().any(|s| !s.other.is_empty()));

    assert_eq!(tarry_edges("k2", &[CoLeader(1), CoLeader(1)]), vec![(0, 1)]);
}

#[test]
fn spanning_tree_composite_on_k2_lockstep_uses_co_leaders() {
    let n = role_net("k2");
    let r = spanning_tree_composite(&n, &SimConfig::lockstep()).unwrap();
    match r.outcome {
        SpanningTreeOutcome::Tree { k, roles, edges, valid, terminated } => {
            assert_eq!(k, 1);
            assert_eq!(roles, vec![TarryRole::CoLeader(1), TarryRole::CoLeader(1)]);
            assert_eq!(edges, vec![(0, 1)]);
            assert!(valid && terminated);
        }
        o => panic!("{o:?}"),
    }
}

#[test]
fn spanning_tree_composite_on_p3_elects_number_one() {
    let n = ported_net(&ugraph("p3"), 3);
    for seed in 0..10 {
        let r = spanning_tree_composite(&n, &SimConfig::random(seed)).unwrap();
        let SpanningTreeOutcome::Tree { k, roles, valid, .. } = r.outcome else { panic!() };
        assert_eq!(k, 3);
        assert!(valid);
        let leader = roles.iter().position(|r| *r == TarryRole::Leader).unwrap();
        assert_eq!(r.maz.states[leader].n, 1);
    }
}

fn g4_lifted_from_g1() -> SymDigraph {
    let base = builtin("h-g1").unwrap().to_digraph().with_canonical_outports();
    let sigma = [(0, parse_cycles(2, "(12)").unwrap()), (3, parse_cycles(2, "(12)").unwrap())];
    let pa = PermAssignment::new(&base, 2, vec![1], sigma).unwrap();
    reidemeister_lift(&base, &pa).unwrap().total().clone()
}

#[test]
fn spanning_tree_composite_on_lifted_g4_picks_degree_three_pair() {
    let total = g4_lifted_from_g1();
    let n = Network::from_digraph(total).unwrap();
    let r = spanning_tree_composite(&n, &SimConfig::lockstep()).unwrap();
    let SpanningTreeOutcome::Tree { k, roles, valid, .. } = r.outcome else { panic!() };
    assert_eq!(k, 2);
    assert!(valid);
    for (v, role) in roles.iter().enumerate() {
        assert_eq!(matches!(role, TarryRole::CoLeader(_)), n.degree(v) == 3, "vertex {v}");
    }
}

#[test]
fn spanning_tree_composite_reports_infeasible_c4() {
    let base = builtin("arete-h2").unwrap().to_digraph().with_canonical_outports();
    let pa = PermAssignment::new(&base, 4, vec![], [(0, parse_cycles(4, "(1234)").unwrap())]).unwrap();
    let n = Network::from_digraph(reidemeister_lift(&base, &pa).unwrap().total().clone()).unwrap();
    let r = spanning_tree_composite(&n, &SimConfig::lockstep()).unwrap();
    match r.outcome {
        SpanningTreeOutcome::Infeasible { k, n, .. } => assert_eq!((k, n), (1, 4)),
        o => panic!("{o:?}"),
    }
}

#[test]
fn topology_composite_recognizes_g4() {
    let target = builtin("h-g4").unwrap().to_digraph();
    let lifted = Network::from_digraph(g4_lifted_from_g1()).unwrap();
    let g = ugraph("h-g4");
    for (net, cfg) in [(lifted, SimConfig::lockstep()), (ported_net(&g, 2), SimConfig::random(6))] {
        let r = topology_composite(&net, &cfg, &mut Budget::default()).unwrap();
        match r.outcome().unwrap() {
            TopologyOutcome::Recognized { graph, .. } => assert!(is_isomorphic(graph, &target).is_some()),
            o => panic!("{o:?}"),
        }
    }
}

#[test]
fn topology_composite_on_g6_lifted_from_g1_is_ambiguous() {
    let base = builtin("h-g1").unwrap().to_digraph().with_canonical_outports();
    let g6 = builtin("h-g6").unwrap().to_digraph();
    let e = enumerate_lifts(&base, 4, LiftFilter::SIMPLE_CONNECTED, None, &mut Budget::unlimited()).unwrap();
    let lift = e.lifts.into_iter().find(|l| is_isomorphic(&l.total, &g6).is_some()).unwrap();
    let net = Network::from_digraph(lift.total).unwrap();
    let r = topology_composite(&net, &SimConfig::lockstep(), &mut Budget::default()).unwrap();
    match r.outcome().unwrap() {
        TopologyOutcome::Ambiguous { k, q, classes } => {
            assert_eq!((*k, *q), (2, 4));
            assert!(classes.len() >= 3);
        }
        o => panic!("{o:?}"),
    }
}

fn check_maz_run(g: &UGraph, port_seed: u64, seed: u64) -> Result<(), TestCaseError> {
    let net = ported_net(g, port_seed);
    let r = run(&net, &Mazurkiewicz, &vec![(); g.n()], &SimConfig::random(seed)).unwrap();
    prop_assert_eq!(r.status, RunStatus::Quiescent);
    let bad = check_lemma_fundamental(&net, &r.states);
    prop_assert!(bad.is_empty(), "{:?}", bad);
    let q = build_quotient_from_mailbox(&r.states[0]).unwrap();
    let vmap: Vec<usize> = r.states.iter().map(|s| s.n as usize - 1).collect();
    let d = net.digraph();
    let amap: Vec<usize> = (0..d.arc_count())
        .map(|a| {
            let b = vmap[d.arc(a).s];
            let p = d.outport(a).unwrap();
            q.graph.arc_at_port(b, p).unwrap()
        })
        .collect();
    let rep = classify_morphism(d, &q.graph, &vmap, &amap).unwrap();
    prop_assert!(rep.is_symmetric_covering && rep.is_port_preserving, "{}", rep.first_failure());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maz_invariants_on_random_graphs(n in 2usize..=8, p in 0.2f64..0.8, gseed: u64, pseed: u64, seed: u64) {
        let g = random_connected_graph(n, p, gseed);
        check_maz_run(&g, pseed, seed)?;
    }

    #[test]
    fn election_on_random_trees(n in 1usize..=10, gseed: u64, pseed: u64, seed: u64) {
        let g = random_tree(n, gseed);
        let net = ported_net(&g, pseed);
        let r = run(&net, &TreeElection, &vec![(); n], &SimConfig::random(seed)).unwrap();
        prop_assert!(elected(&net, &r.states).is_ok());
    }

    #[test]
    fn tarry_from_election_spans_random_trees(n in 2usize..=10, gseed: u64, pseed: u64, seed: u64) {
        let g = random_tree(n, gseed);
        let net = ported_net(&g, pseed);
        let r = run(&net, &TreeElection, &vec![(); n], &SimConfig::random(seed)).unwrap();
        let mut roles = vec![TarryRole::Follower; n];
        match elected(&net, &r.states).unwrap() {
            Elected::Leader { vertex } => roles[vertex] = TarryRole::Leader,
            Elected::CoLeaders { vertices, ports } => {
                roles[vertices[0]] = TarryRole::CoLeader(ports[0]);
                roles[vertices[1]] = TarryRole::CoLeader(ports[1]);
            }
        }
        let t = run(&net, &Tarry, &roles, &SimConfig::random(seed ^ 1)).unwrap();
        let edges = tree_edges(&net, &t.states).unwrap();
        prop_assert!(is_spanning_tree(n, &edges));
        prop_assert!(t.states.iter().all(|s| s.done));
    }
}

#[test]
fn quotient_of_k2_runs() {
    let n = role_net("k2");
    let sym = run(&n, &Mazurkiewicz, &[(), ()], &SimConfig::lockstep()).unwrap();
    let q = build_quotient_from_mailbox(&sym.states[0]).unwrap();
    assert_eq!((q.k, q.graph.arc_count(), q.graph.self_symmetric_loops(0)), (1, 1, 1));
    let mut sim = Simulation::new(&n, &Mazurkiewicz, &[(), ()]).unwrap();
    sim.execute(Event::Wakeup(1)).unwrap();
    sim.execute(Event::Deliver(1)).unwrap();
    while let Some(&ev) = sim.enabled().first() {
        sim.execute(ev).unwrap();
    }
    let q = build_quotient_from_mailbox(&sim.states()[0]).unwrap();
    assert_eq!(q.k, 2);
    assert!(is_isomorphic(&q.graph, &dir(&ugraph("k2"), None)).is_some());
}
