use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udense::metrics::{expected_densest_subgraph, expected_density};
use udense::{NodeSet, NotionRegistry, UncertainGraph};

/// Maximum expected density over every non-empty subset, and the union of
/// the maximizers (within `tol`).
fn brute_eds(g: &UncertainGraph, spec: &str, tol: f64) -> (f64, NodeSet) {
    let notion = NotionRegistry::default().parse(spec).unwrap();
    let n = g.node_count();
    let values: Vec<(NodeSet, f64)> = (1u64..1 << n)
        .map(|mask| {
            let s = NodeSet::from_mask(mask);
            let d = expected_density(g, &s, &*notion).unwrap();
            (s, d)
        })
        .collect();
    let best = values.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let union =
        values.iter().filter(|(_, d)| best - d <= tol).fold(NodeSet::default(), |acc, (s, _)| acc.union(s));
    (best, union)
}

#[test]
fn expected_densest_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for spec in ["edge", "clique:3"] {
        let notion = NotionRegistry::default().parse(spec).unwrap();
        for i in 0..40 {
            let n = rng.gen_range(3..=8u32);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.55) {
                        // Two-decimal probabilities are exact under the weight quantization.
                        edges.push((u, v, rng.gen_range(1..=100) as f64 / 100.0));
                    }
                }
            }
            let g = UncertainGraph::new(n as usize, edges).unwrap();
            let (set, eed) = expected_densest_subgraph(&g, &*notion).unwrap();
            let (best, union) = brute_eds(&g, spec, 1e-9);
            assert!((eed - best).abs() < 1e-9, "{spec} graph {i}: {eed} vs {best}");
            if best > 0.0 {
                assert_eq!(set, union, "{spec} graph {i}");
            }
        }
    }
}
