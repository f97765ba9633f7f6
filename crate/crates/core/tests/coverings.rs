use std::ops::ControlFlow;

use anoncover::coverings::{
    brute_force_base_oracle, classify_morphism, enumerate_bases, equitable_partitions, is_minimal, partition_to_base, BaseSearch,
    FibrePartition,
};
use anoncover::feasibility::{spanning_tree_feasible, Decision};
use anoncover::graphs::generate::{random_connected_graph, random_tree};
use anoncover::graphs::{builtin, SymDigraph};
use anoncover::lifts::{canonical_form, default_tree, involutions, is_isomorphic, permutations, reidemeister_lift, PermAssignment};
use anoncover::{dir, Budget};
use proptest::prelude::*;

fn base_graph(pick: usize, seed: u64) -> SymDigraph {
    const NAMED: [&str; 6] = ["h-g1", "h-g2", "h-g3", "fig4-bouquet", "arete-h2", "fig1-base"];
    match NAMED.get(pick) {
        Some(name) => builtin(name).unwrap().to_digraph(),
        None => dir(&random_connected_graph(2 + (seed % 4) as usize, 0.5, seed), None),
    }
}

/// A lift of `base` with cotree permutations drawn by `picks`.
fn random_lift(base: &SymDigraph, q: usize, picks: &[usize]) -> anoncover::CoveringMap {
    let tree = default_tree(base);
    let probe = PermAssignment::new(base, q, tree.iter().copied(), []).unwrap();
    let (perms, invs) = (permutations(q), involutions(q));
    let sigma: Vec<(usize, Vec<usize>)> = (0..base.arc_count())
        .filter(|&a| base.sym(a) >= a && !probe.tree().contains(&a))
        .zip(picks.iter().cycle())
        .map(|(a, &i)| {
            let choices = if base.is_self_symmetric(a) { &invs } else { &perms };
            (a, choices[i % choices.len()].clone())
        })
        .collect();
    let pa = PermAssignment::new(base, q, tree, sigma).unwrap();
    reidemeister_lift(base, &pa).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifts_are_symmetric_coverings_recovered_from_their_fibres(
        pick in 0usize..9, seed: u64, q in 1usize..=3, picks in prop::collection::vec(0usize..1000, 1..8),
    ) {
        let base = base_graph(pick, seed);
        let cover = random_lift(&base, q, &picks);
        let rep = classify_morphism(cover.total(), &base, cover.vmap(), cover.amap()).unwrap();
        prop_assert!(rep.is_symmetric_covering, "{}", rep.first_failure());
        prop_assert_eq!(rep.sheets, Some(q));
        prop_assert_eq!(cover.total().n(), q * base.n());

        let p = FibrePartition::from_covering(&cover).unwrap();
        prop_assert!(p.is_equitable(cover.total()));
        let fast = partition_to_base(cover.total(), &p).unwrap();
        let c = fast.covering().expect("fibres of a covering carry a base");
        prop_assert!(classify_morphism(c.total(), c.base(), c.vmap(), c.amap()).unwrap().is_symmetric_covering);
        prop_assert_eq!(c.base().arc_count(), base.arc_count());
        if cover.total().n() <= 12 {
            prop_assert!(brute_force_base_oracle(cover.total(), &p).unwrap().is_some());
        }
    }

    #[test]
    fn canonical_form_ignores_labelling(seed: u64, n in 2usize..=9, shuffle in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
        let d = dir(&random_connected_graph(n, 0.4, seed), None);
        let perm: Vec<usize> = shuffle.into_iter().filter(|&v| v < n).collect();
        let moved = d.relabel_vertices(&perm);
        let (a, b) = (canonical_form(&d), canonical_form(&moved));
        prop_assert_eq!(a.certificate(), b.certificate());
        prop_assert!(is_isomorphic(&d, &moved).is_some());
    }

    #[test]
    fn minimality_agrees_with_base_enumeration(seed: u64, n in 2usize..=7) {
        let d = dir(&random_connected_graph(n, 0.5, seed), None);
        let none = enumerate_bases(&d, BaseSearch::default(), &mut Budget::unlimited()).unwrap().bases.is_empty();
        prop_assert_eq!(is_minimal(&d, &mut Budget::unlimited()).unwrap().as_bool(), Some(none));
    }

    #[test]
    fn trees_admit_spanning_tree_construction(seed: u64, n in 1usize..=9) {
        let v = spanning_tree_feasible(&random_tree(n, seed), &mut Budget::unlimited()).unwrap();
        prop_assert_eq!(v.decision, Decision::Feasible);
    }
}

#[test]
fn partition_to_base_matches_oracle_on_corpus() {
    let names = ["k2", "p3", "p4", "c4", "c6", "k4", "k33", "prism", "star3", "fig1-base", "h-g1", "h-g2", "h-g3", "h-g4", "h-g5", "h-g6", "h-g7"];
    for name in names {
        let d = builtin(name).unwrap().to_digraph();
        for q in (1..=d.n()).filter(|q| d.n() % q == 0) {
            equitable_partitions(&d, q, &mut Budget::unlimited(), |p, _| {
                let fast = partition_to_base(&d, p).unwrap().covering().is_some();
                let slow = brute_force_base_oracle(&d, p).unwrap().is_some();
                assert_eq!(fast, slow, "{name} {:?}", p.labels());
                Ok(ControlFlow::Continue(()))
            })
            .unwrap();
        }
    }
}
