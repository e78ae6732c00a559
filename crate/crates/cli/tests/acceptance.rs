//! Acceptance suite: one PASS/FAIL line per criterion. Reference values come
//! from exhaustive enumeration (subset brute force, world enumeration) and
//! hand-checked small examples; tolerances are fixed below.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use udense::bounds::mpds_inclusion_bound;
use udense::densest::{enumerate_all_densest, heuristic_pattern_dense};
use udense::estimate::sample_candidate_pool;
use udense::flow::max_flow;
use udense::metrics::{expected_densest_subgraph, expected_density, probabilistic_clustering_coefficient, probabilistic_density};
use udense::notion::induced_density;
use udense::oracle::{brute_force_count, brute_force_densest, matching_identity_check, world_table};
use udense::solver::ExactSolver;
use udense::{Density, Graph, NodeSet, NotionRegistry, UncertainGraph};

/// Estimates at θ = 10^5 must be within this of the true probability.
const ESTIMATE_TOLERANCE: f64 = 0.01;
/// Floating-point slack for exactly representable closed forms.
const EXACT_TOLERANCE: f64 = 1e-12;
/// Allowed shortfall of the empirical inclusion frequency below its bound.
const INCLUSION_SLACK: f64 = 0.03;
/// Unbiasedness: |mean − τ| ≤ this many standard errors.
const UNBIASED_SIGMAS: f64 = 3.0;

const FOUR_PATH: &str = "0 1 0.4\n0 2 0.4\n1 3 0.7\n";

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn four_path() -> UncertainGraph {
    UncertainGraph::new(4, [(0, 1, 0.4), (0, 2, 0.4), (1, 3, 0.7)]).unwrap()
}

fn set(nodes: &[u32]) -> NodeSet {
    NodeSet::new(nodes.to_vec())
}

fn two_decimals(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, max_edges: usize) -> Graph {
    let n = rng.gen_range(2..=max_n);
    let p: f64 = rng.gen_range(0.2..0.9);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if edges.len() < max_edges && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

fn cli(args: &[&str]) -> Result<String, String> {
    let argv = std::iter::once("udense").chain(args.iter().copied());
    udense_cli::execute(argv).map(|r| r.text).map_err(|f| f.to_string())
}

/// First result of a CLI result JSON: (node labels, estimate).
fn top_result(text: &str) -> Option<(Vec<u64>, f64)> {
    let v: Value = serde_json::from_str(text).ok()?;
    let first = v["results"].get(0)?;
    let nodes = first["nodes"].as_array()?.iter().map(|n| n.as_u64()).collect::<Option<Vec<_>>>()?;
    Some((nodes, first["estimate"].as_f64()?))
}

fn probability_table() -> Verdict {
    let start = Instant::now();
    let edge = NotionRegistry::default().parse("edge").unwrap();
    let g = four_path();
    let table = world_table(&g, &*edge).unwrap();
    let rows: [(&[u32], f64, f64); 6] = [
        (&[0, 1], 0.07, 0.20),
        (&[0, 2], 0.24, 0.20),
        (&[1, 3], 0.42, 0.35),
        (&[0, 1, 2], 0.05, 0.27),
        (&[0, 1, 3], 0.17, 0.37),
        (&[0, 1, 2, 3], 0.28, 0.38),
    ];
    let mut bad = Vec::new();
    for (nodes, dsp, eed) in rows {
        let s = set(nodes);
        let tau = table.tau(&s);
        let e = expected_density(&g, &s, &*edge).unwrap();
        if two_decimals(tau) != dsp || two_decimals(e) != eed {
            bad.push(format!("{nodes:?}: τ {tau:.4}, EED {e:.4}"));
        }
    }
    let elapsed = start.elapsed();
    verdict(bad.is_empty() && elapsed < Duration::from_secs(1), format!("{} mismatches {bad:?}, {elapsed:.2?}", bad.len()))
}

fn mpds_estimator(dir: &std::path::Path) -> Verdict {
    let path = dir.join("path4.txt");
    let start = Instant::now();
    let out = cli(&["mpds", "--graph", path.to_str().unwrap(), "--density", "edge", "--k", "1", "--theta", "100000", "--seed", "7"]);
    let elapsed = start.elapsed();
    match out.as_deref().map(top_result) {
        Ok(Some((nodes, est))) => verdict(
            nodes == [1, 3] && (est - 0.42).abs() <= ESTIMATE_TOLERANCE && elapsed < Duration::from_secs(5),
            format!("top-1 {nodes:?}, τ̂ {est:.4}, {elapsed:.2?}"),
        ),
        other => verdict(false, format!("bad output {other:?}")),
    }
}

fn nds_estimator(dir: &std::path::Path) -> Verdict {
    let edge = NotionRegistry::default().parse("edge").unwrap();
    let gamma = world_table(&four_path(), &*edge).unwrap().gamma(&set(&[1, 3]));
    let path = dir.join("path4.txt");
    let out = cli(&["nds", "--graph", path.to_str().unwrap(), "--k", "1", "--l-m", "2", "--theta", "100000", "--seed", "7"]);
    match out.as_deref().map(top_result) {
        Ok(Some((nodes, est))) => verdict(
            (gamma - 0.7).abs() < EXACT_TOLERANCE && nodes == [1, 3] && (est - 0.7).abs() <= ESTIMATE_TOLERANCE,
            format!("γ {gamma:.12}, top-1 {nodes:?}, γ̂ {est:.4}"),
        ),
        other => verdict(false, format!("bad output {other:?}")),
    }
}

fn enumeration_equivalence() -> Verdict {
    let start = Instant::now();
    let reg = NotionRegistry::default();
    let plan: [(&str, usize, usize); 6] = [
        ("edge", 9, 50),
        ("clique:3", 8, 25),
        ("clique:4", 8, 25),
        ("pattern:2-star", 8, 34),
        ("pattern:3-star", 8, 33),
        ("pattern:diamond", 8, 33),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut graphs, mut failures) = (0, Vec::new());
    for (spec, max_n, count) in plan {
        let notion = reg.parse(spec).unwrap();
        for i in 0..count {
            graphs += 1;
            let g = random_graph(&mut rng, max_n, usize::MAX);
            let (rho, brute) = brute_force_densest(&g, notion.template()).unwrap();
            let ours = enumerate_all_densest(&g, &*notion).unwrap();
            let ok = if brute.is_empty() {
                ours.degenerate
            } else {
                let found: BTreeSet<NodeSet> = ours.all_densest.iter().cloned().collect();
                ours.optimum == rho
                    && found.len() == ours.all_densest.len()
                    && found == brute.into_iter().collect::<BTreeSet<_>>()
            };
            if !ok {
                failures.push(format!("{spec}#{i}"));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && graphs == 200 && elapsed < Duration::from_secs(60),
        format!("{graphs} graphs, {} failures {failures:?}, {elapsed:.2?}", failures.len()),
    )
}

fn bridged_triangles() -> Verdict {
    let g = Graph::new(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap();
    let c3 = NotionRegistry::default().parse("clique:3").unwrap();
    let r = enumerate_all_densest(&g, &*c3).unwrap();
    let found: BTreeSet<NodeSet> = r.all_densest.iter().cloned().collect();
    let expected: BTreeSet<NodeSet> = [set(&[0, 1, 2]), set(&[3, 4, 5]), set(&[0, 1, 2, 3, 4, 5])].into();
    verdict(
        r.optimum == Density::new(1, 3) && r.all_densest.len() == 3 && found == expected,
        format!("ρ* {}, sets {:?}", r.optimum, r.all_densest),
    )
}

fn two_edge_world() -> Verdict {
    let g = Graph::new(4, [(0, 2), (1, 3)]).unwrap();
    let edge = NotionRegistry::default().parse("edge").unwrap();
    let r = enumerate_all_densest(&g, &*edge).unwrap();
    let found: BTreeSet<NodeSet> = r.all_densest.iter().cloned().collect();
    let expected: BTreeSet<NodeSet> = [set(&[0, 2]), set(&[1, 3]), set(&[0, 1, 2, 3])].into();
    verdict(
        r.optimum == Density::new(1, 2) && r.all_densest.len() == 3 && found == expected,
        format!("ρ* {}, sets {:?}", r.optimum, r.all_densest),
    )
}

fn matching_identity() -> Verdict {
    let triangle = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    let tri = matching_identity_check(&triangle);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for i in 0..50 {
        let g = random_graph(&mut rng, 8, 12);
        match matching_identity_check(&g) {
            Ok((lhs, rhs)) if lhs == rhs => {}
            other => failures.push(format!("#{i}: {other:?}")),
        }
    }
    let tri_ok = matches!(tri, Ok((l, r)) if l == 0.5 && r == 0.5);
    verdict(tri_ok && failures.is_empty(), format!("triangle {tri:?}, {} failures {failures:?}", failures.len()))
}

fn hoeffding_suite() -> Verdict {
    let edge = NotionRegistry::default().parse("edge").unwrap();
    let bd = set(&[1, 3]);
    let solver = ExactSolver::default();
    let (runs, theta) = (200u64, 500u64);
    let mean = (0..runs)
        .map(|seed| sample_candidate_pool(&four_path(), &*edge, &solver, theta, seed).unwrap().estimate(&bd))
        .sum::<f64>()
        / runs as f64;
    let se = (0.42f64 * 0.58 / (runs * theta) as f64).sqrt();
    let unbiased = (mean - 0.42).abs() <= UNBIASED_SIGMAS * se;

    let trials = 500u64;
    let hits = (0..trials)
        .filter(|&t| sample_candidate_pool(&four_path(), &*edge, &solver, 10, 1_000_000 + t).unwrap().counts.contains_key(&bd))
        .count();
    let freq = hits as f64 / trials as f64;
    let bound = mpds_inclusion_bound(&[0.42], 10);
    verdict(
        unbiased && freq >= bound - INCLUSION_SLACK,
        format!("mean τ̂ {mean:.5} (3·SE {:.5}); inclusion {freq:.3} vs bound {bound:.5}", UNBIASED_SIGMAS * se),
    )
}

fn cut_identities() -> Verdict {
    let reg = NotionRegistry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut checked, mut failures) = (0, Vec::new());
    for spec in ["edge", "clique:3", "clique:4", "pattern:2-star", "pattern:3-star", "pattern:diamond"] {
        let notion = reg.parse(spec).unwrap();
        for i in 0..30 {
            let g = random_graph(&mut rng, 8, usize::MAX);
            let (rho, brute) = brute_force_densest(&g, notion.template()).unwrap();
            if brute.is_empty() {
                continue;
            }
            checked += 1;
            let all: NodeSet = (0..g.node_count() as u32).collect();
            let motifs = brute_force_count(&g, notion.template(), &all) as i64;
            let net = notion.index(&g).unwrap().flow_network(rho).unwrap();
            let expected = notion.template().node_count() as i64 * motifs * net.scale();
            let value = max_flow(&net).value;
            if value != expected {
                failures.push(format!("{spec}#{i}: {value} vs {expected}"));
            }
        }
    }
    verdict(failures.is_empty(), format!("{checked} optima, {} failures {failures:?}", failures.len()))
}

fn baseline_contrast() -> Verdict {
    let edge = NotionRegistry::default().parse("edge").unwrap();
    let (eds, eed) = expected_densest_subgraph(&four_path(), &*edge).unwrap();
    let mpds = world_table(&four_path(), &*edge).unwrap().ranked_tau()[0].0.clone();
    let t = UncertainGraph::new(3, [(0, 1, 0.5), (0, 2, 0.5), (1, 2, 0.5)]).unwrap();
    let all = set(&[0, 1, 2]);
    let pd = probabilistic_density(&t, &all).unwrap();
    let pcc = probabilistic_clustering_coefficient(&t, &all);
    verdict(
        eds == set(&[0, 1, 2, 3])
            && (eed - 0.375).abs() < EXACT_TOLERANCE
            && mpds == set(&[1, 3])
            && (pd - 0.5).abs() < EXACT_TOLERANCE
            && (pcc - 0.5).abs() < EXACT_TOLERANCE,
        format!("EDS {eds:?} EED {eed:.6}, MPDS {mpds:?}, PD {pd:.6}, PCC {pcc:.6}"),
    )
}

fn heuristic_bound() -> Verdict {
    let reg = NotionRegistry::default();
    let specs = ["edge", "clique:3", "pattern:2-star", "pattern:diamond"];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut sets, mut failures) = (0, Vec::new());
    for i in 0..100 {
        let notion = reg.parse(specs[i % specs.len()]).unwrap();
        let g = random_graph(&mut rng, 8, usize::MAX);
        let (rho, _) = brute_force_densest(&g, notion.template()).unwrap();
        let order = Density::from_integer(notion.order() as i64);
        for s in heuristic_pattern_dense(&g, &*notion).unwrap() {
            sets += 1;
            let d = induced_density(&g, &s, &*notion).unwrap();
            if d * order < rho {
                failures.push(format!("{}#{i}: {d} < {rho}/{order}", notion.spec()));
            }
        }
    }
    verdict(failures.is_empty() && sets > 0, format!("100 graphs, {sets} sets, {} failures {failures:?}", failures.len()))
}

fn determinism(dir: &std::path::Path) -> Verdict {
    let path = dir.join("path4.txt");
    let g = path.to_str().unwrap();
    let commands: [&[&str]; 4] = [
        &["mpds", "--graph", g, "--k", "3", "--theta", "20000", "--seed", "3"],
        &["nds", "--graph", g, "--k", "3", "--l-m", "2", "--theta", "20000", "--seed", "3"],
        &["mpds", "--graph", g, "--density", "clique:2", "--k", "2", "--auto-theta", "--seed", "5", "--heuristic"],
        &["eds", "--graph", g],
    ];
    let mut differing = Vec::new();
    for cmd in commands {
        let outputs: Vec<Result<String, String>> = ["1", "4", "8"]
            .iter()
            .map(|threads| {
                let mut args = cmd.to_vec();
                args.extend(["--threads", threads]);
                cli(&args)
            })
            .collect();
        if outputs[0].is_err() || outputs.iter().any(|o| o != &outputs[0]) {
            differing.push(cmd[0]);
        }
    }
    verdict(differing.is_empty(), format!("4 commands × threads 1/4/8, differing {differing:?}"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    std::fs::write(dir.path().join("path4.txt"), FOUR_PATH).expect("write graph");

    let criteria: Vec<Criterion> = vec![
        ("exact probabilities and expected densities on the four-node path", Box::new(probability_table)),
        ("MPDS estimate on the four-node path", Box::new(|| mpds_estimator(dir.path()))),
        ("NDS containment probability and estimate", Box::new(|| nds_estimator(dir.path()))),
        ("all-densest enumeration equals brute force", Box::new(enumeration_equivalence)),
        ("bridged triangles, 3-clique density", Box::new(bridged_triangles)),
        ("world with two disjoint edges", Box::new(two_edge_world)),
        ("matching-count identity", Box::new(matching_identity)),
        ("unbiasedness and empirical inclusion", Box::new(hoeffding_suite)),
        ("min-cut identities at the optimum", Box::new(cut_identities)),
        ("expected-densest baseline contrast", Box::new(baseline_contrast)),
        ("heuristic density guarantee", Box::new(heuristic_bound)),
        ("thread-count determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.passed {
            failed += 1;
        }
        println!("criterion {:>2} {}: {name} — {}", i + 1, if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
