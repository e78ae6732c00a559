use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udense::densest::{core_prune, enumerate_all_densest, maximal_densest, optimal_density, peel_lower_bound};
use udense::flow::{full_saturation, max_flow};
use udense::notion::{induced_density, NotionRegistry};
use udense::oracle::brute_force_densest;
use udense::rational::ceil_to_u64;
use udense::{Graph, NodeSet};

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(2..=max_n);
    let p: f64 = rng.gen_range(0.2..0.9);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

fn check(spec: &str, max_n: usize, graphs: usize, seed: u64) {
    let notion = NotionRegistry::default().parse(spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..graphs {
        let g = random_graph(&mut rng, max_n);
        let (rho, brute) = brute_force_densest(&g, notion.template()).unwrap();
        let result = enumerate_all_densest(&g, &*notion).unwrap();
        if brute.is_empty() {
            assert!(result.degenerate, "{spec} graph {i}");
            continue;
        }
        assert_eq!(result.optimum, rho, "{spec} graph {i}: {:?}", g.edges());
        let found: BTreeSet<NodeSet> = result.all_densest.iter().cloned().collect();
        assert_eq!(found.len(), result.all_densest.len(), "duplicates");
        let expected: BTreeSet<NodeSet> = brute.into_iter().collect();
        assert_eq!(found, expected, "{spec} graph {i}: {:?}", g.edges());

        let union = expected.iter().fold(NodeSet::default(), |acc, s| acc.union(s));
        assert_eq!(result.maximal, union);
        assert_eq!(maximal_densest(&g, &*notion).unwrap().maximal, union);
        assert_eq!(induced_density(&g, &union, &*notion).unwrap(), rho);

        // Pruning to the ⌈ρ̃⌉-core keeps every densest vertex.
        let k = ceil_to_u64(peel_lower_bound(&g, &*notion).unwrap());
        let (_, kept) = core_prune(&g, &*notion, k).unwrap();
        assert!(union.iter().all(|v| kept.contains(&v)));

        // At the optimum the min cut equals the all-source-arcs cut.
        let index = notion.index(&g).unwrap();
        let net = index.flow_network(rho).unwrap();
        let full = full_saturation(index.order(), index.total(), net.scale()).unwrap();
        assert_eq!(max_flow(&net).value, full);
    }
}

#[test]
fn edge_density_matches_brute_force() {
    check("edge", 9, 60, 1);
}

#[test]
fn clique_density_matches_brute_force() {
    check("clique:3", 8, 40, 2);
    check("clique:4", 8, 40, 3);
}

#[test]
fn pattern_density_matches_brute_force() {
    check("pattern:2-star", 8, 30, 4);
    check("pattern:3-star", 8, 30, 5);
    check("pattern:diamond", 8, 30, 6);
    check("pattern:c3-star", 7, 20, 7);
}

#[test]
fn two_clique_equals_edge() {
    let reg = NotionRegistry::default();
    let (edge, c2) = (reg.parse("edge").unwrap(), reg.parse("clique:2").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let g = random_graph(&mut rng, 9);
        assert_eq!(optimal_density(&g, &*edge).unwrap(), optimal_density(&g, &*c2).unwrap());
        assert_eq!(enumerate_all_densest(&g, &*edge).unwrap(), enumerate_all_densest(&g, &*c2).unwrap());
    }
}
