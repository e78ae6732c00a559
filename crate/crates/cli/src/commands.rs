use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use serde_json::{json, Map, Value};
use udense::bounds::{mpds_inclusion_bound, mpds_return_bound, nds_bounds};
use udense::estimate::{auto_theta, estimate_topk_mpds_with, estimate_topk_nds_with, theta_ladder, topk_jaccard, EstimateResult, Mode};
use udense::metrics::{
    expected_densest_subgraph, expected_density, load_labels, probabilistic_clustering_coefficient,
    probabilistic_density, purity, rank_f1,
};
use udense::oracle::{exact_topk, exact_topk_nds, matching_identity_check, world_table};
use udense::solver::{SolverRegistry, WorldSolver};
use udense::synthetic::{barabasi_albert, erdos_renyi, ProbabilityRange};
use udense::uncertain::{assign_probabilities, load_uncertain_graph, ProbabilityModel};
use udense::{DensityNotion, NodeId, NodeSet, NotionRegistry, UncertainGraph};

use crate::json::{self, real};
use crate::{
    BenchArgs, Command, EdsArgs, Failure, Generator, GraphArgs, MetricsArgs, MpdsArgs, NdsArgs, OracleArgs, Rendered,
    RunArgs, SamplingArgs,
};

/// Floor applied to probabilities derived from interaction counts.
const DERIVED_PROBABILITY_FLOOR: f64 = 1e-9;

type Outcome<T> = Result<T, Failure>;

pub(crate) fn dispatch(command: Command) -> Outcome<Rendered> {
    let threads = match &command {
        Command::Mpds(a) => a.run.threads,
        Command::Nds(a) => a.run.threads,
        Command::Oracle(a) => a.run.threads,
        Command::Eds(a) => a.run.threads,
        Command::Metrics(a) => a.run.threads,
        Command::Bench(a) => a.run.threads,
    };
    let body = move || match command {
        Command::Mpds(a) => mpds(a),
        Command::Nds(a) => nds(a),
        Command::Oracle(a) => oracle(a),
        Command::Eds(a) => eds(a),
        Command::Metrics(a) => metrics(a),
        Command::Bench(a) => bench(a),
    };
    match threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Compute(e.into()))?
            .install(body),
        None => body(),
    }
}

fn parse_model(spec: &str) -> Outcome<Option<ProbabilityModel>> {
    match spec {
        "given" => Ok(None),
        "reciprocal-degree" => Ok(Some(ProbabilityModel::ReciprocalDegree)),
        _ => {
            let mean = spec
                .strip_prefix("exp:")
                .and_then(|m| m.parse::<f64>().ok())
                .ok_or_else(|| Failure::Usage(format!("unknown probability model `{spec}`")))?;
            Ok(Some(ProbabilityModel::ExponentialCdf { mean }))
        }
    }
}

/// "u v count" lines for the derived-probability models.
fn parse_counts(text: &str) -> anyhow::Result<Vec<(u64, u64, f64)>> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed = match fields.as_slice() {
            [u, v] => u.parse().ok().zip(v.parse().ok()).map(|(u, v)| (u, v, 1.0)),
            [u, v, t] => u.parse().ok().zip(v.parse().ok()).zip(t.parse().ok()).map(|((u, v), t)| (u, v, t)),
            _ => None,
        };
        edges.push(parsed.with_context(|| format!("line {}: expected `u v count`", i + 1))?);
    }
    Ok(edges)
}

fn load_graph(path: &Path, model: &str) -> Outcome<UncertainGraph> {
    match parse_model(model)? {
        None => Ok(load_uncertain_graph(path)?),
        Some(model) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))
                .map_err(Failure::Compute)?;
            let counts = parse_counts(&text).map_err(Failure::Compute)?;
            Ok(assign_probabilities(&counts, model, DERIVED_PROBABILITY_FLOOR)?)
        }
    }
}

fn load(args: &GraphArgs) -> Outcome<UncertainGraph> {
    load_graph(&args.graph, &args.prob_model)
}

fn notion(run: &RunArgs) -> Outcome<Arc<dyn DensityNotion>> {
    Ok(NotionRegistry::default().parse(&run.density)?)
}

fn solver(heuristic: bool) -> Outcome<Arc<dyn WorldSolver>> {
    Ok(SolverRegistry::default().get(if heuristic { "heuristic" } else { "exact" })?)
}

/// Comma-separated node labels to a node set of `graph`.
fn parse_set(graph: &UncertainGraph, text: &str) -> Outcome<NodeSet> {
    let mut members = Vec::new();
    for field in text.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let label: u64 = field.parse().map_err(|_| Failure::Usage(format!("bad node label `{field}`")))?;
        let node = graph.node_of_label(label).ok_or_else(|| Failure::Usage(format!("no node labelled {label}")))?;
        members.push(node);
    }
    if members.is_empty() {
        return Err(Failure::Usage("--set is empty".into()));
    }
    Ok(NodeSet::new(members))
}

fn emit(value: Value, run: &RunArgs) -> Rendered {
    Rendered { text: json::render(&value), out: run.out.clone() }
}

fn estimate_json(mode: &str, graph: &UncertainGraph, r: &EstimateResult, bounds: Map<String, Value>) -> Value {
    json!({
        "mode": mode,
        "notion": r.notion,
        "k": r.k,
        "theta": r.theta,
        "seed": r.seed,
        "results": json::ranked(graph, &r.ranked, "estimate"),
        "bounds": bounds,
        "warnings": r.warnings,
    })
}

fn sampled(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    s: &SamplingArgs,
    mode: Mode,
) -> Outcome<EstimateResult> {
    let solver = solver(s.heuristic)?;
    let result = match (s.auto_theta, mode) {
        (true, mode) => auto_theta(graph, notion, &*solver, mode, s.k, s.seed)?,
        (false, Mode::Mpds) => estimate_topk_mpds_with(graph, notion, &*solver, s.k, s.theta, s.seed)?,
        (false, Mode::Nds { l_m }) => estimate_topk_nds_with(graph, notion, &*solver, s.k, l_m, s.theta, s.seed)?,
    };
    Ok(result)
}

fn mpds(a: MpdsArgs) -> Outcome<Rendered> {
    let graph = load(&a.graph)?;
    let notion = notion(&a.run)?;
    let result = sampled(&graph, &*notion, &a.sampling, Mode::Mpds)?;
    let mut bounds = Map::new();
    if a.sampling.bounds {
        let ranked = world_table(&graph, &*notion)?.ranked_tau();
        let k = result.k;
        let mut top: Vec<f64> = ranked.iter().take(k + 1).map(|(_, t)| *t).collect();
        let inclusion = mpds_inclusion_bound(&top[..top.len().min(k)], result.theta);
        top.resize(k + 1, 0.0);
        let others: Vec<f64> = ranked.iter().skip(k).map(|(_, t)| *t).collect();
        bounds.insert("inclusion".into(), real(inclusion));
        bounds.insert("return".into(), real(mpds_return_bound(&top, &others, result.theta)));
    }
    Ok(emit(estimate_json("mpds", &graph, &result, bounds), &a.run))
}

fn nds(a: NdsArgs) -> Outcome<Rendered> {
    let graph = load(&a.graph)?;
    let notion = notion(&a.run)?;
    let result = sampled(&graph, &*notion, &a.sampling, Mode::Nds { l_m: a.l_m })?;
    let mut bounds = Map::new();
    if a.sampling.bounds {
        let b = nds_bounds(&graph, &*notion, result.k, a.l_m, result.theta)?;
        bounds.insert("closure".into(), real(b.closure_bound));
        bounds.insert("return".into(), real(b.return_bound));
    }
    let mut value = estimate_json("nds", &graph, &result, bounds);
    value["l_m"] = a.l_m.into();
    Ok(emit(value, &a.run))
}

fn oracle(a: OracleArgs) -> Outcome<Rendered> {
    let graph = load(&a.graph)?;
    let notion = notion(&a.run)?;
    if a.matching {
        let (lhs, rhs) = matching_identity_check(&graph.skeleton())?;
        return Ok(emit(json!({"lhs": real(lhs), "rhs": real(rhs)}), &a.run));
    }
    if let Some(text) = &a.set {
        let set = parse_set(&graph, text)?;
        let table = world_table(&graph, &*notion)?;
        return Ok(emit(json!({"tau": real(table.tau(&set)), "gamma": real(table.gamma(&set))}), &a.run));
    }
    let (key, ranked) = match a.l_m {
        Some(l_m) => ("gamma", exact_topk_nds(&graph, &*notion, a.k, l_m)?),
        None => ("tau", exact_topk(&graph, &*notion, a.k)?),
    };
    let mut value = json!({
        "mode": "oracle",
        "notion": notion.spec(),
        "k": a.k,
        "measure": key,
        "results": json::ranked(&graph, &ranked, "probability"),
    });
    if let Some(l_m) = a.l_m {
        value["l_m"] = l_m.into();
    }
    Ok(emit(value, &a.run))
}

fn eds(a: EdsArgs) -> Outcome<Rendered> {
    let graph = load(&a.graph)?;
    let notion = notion(&a.run)?;
    let (set, eed) = expected_densest_subgraph(&graph, &*notion)?;
    Ok(emit(
        json!({
            "mode": "eds",
            "notion": notion.spec(),
            "nodes": json::labels(&graph, &set),
            "expected_density": real(eed),
        }),
        &a.run,
    ))
}

/// `results[*].nodes` of a result JSON file, as node sets of `graph`.
fn read_ranking(graph: &UncertainGraph, path: &Path) -> Outcome<Vec<NodeSet>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Compute)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let bad = || Failure::Usage(format!("{}: expected a `results` list of `nodes` arrays", path.display()));
    let results = value.get("results").and_then(Value::as_array).ok_or_else(bad)?;
    results
        .iter()
        .map(|entry| {
            let nodes = entry.get("nodes").and_then(Value::as_array).ok_or_else(bad)?;
            let labels: Vec<String> = nodes.iter().map(|n| n.as_u64().map(|l| l.to_string()).ok_or_else(bad)).collect::<Outcome<_>>()?;
            parse_set(graph, &labels.join(","))
        })
        .collect()
}

fn metrics(a: MetricsArgs) -> Outcome<Rendered> {
    let graph = load(&a.graph)?;
    let notion = notion(&a.run)?;
    if a.set.is_none() && a.ours.is_none() {
        return Err(Failure::Usage("metrics needs --set or --ours/--exact".into()));
    }
    let mut out = Map::new();
    if let Some(text) = &a.set {
        let set = parse_set(&graph, text)?;
        if set.len() >= 2 {
            out.insert("pd".into(), real(probabilistic_density(&graph, &set)?));
        }
        out.insert("pcc".into(), real(probabilistic_clustering_coefficient(&graph, &set)));
        out.insert("expected_density".into(), real(expected_density(&graph, &set, &*notion)?));
        if let Some(path) = &a.labels {
            let community_of: HashMap<NodeId, String> = load_labels(path)?
                .into_iter()
                .filter_map(|(label, c)| graph.node_of_label(label).map(|v| (v, c)))
                .collect();
            out.insert("purity".into(), real(purity(&set, &community_of)?));
        }
    } else if a.labels.is_some() {
        return Err(Failure::Usage("--labels needs --set".into()));
    }
    if let (Some(ours), Some(exact)) = (&a.ours, &a.exact) {
        let mut ours = read_ranking(&graph, ours)?;
        let mut exact = read_ranking(&graph, exact)?;
        // Missing ranks count as empty sets.
        let len = ours.len().max(exact.len());
        ours.resize(len, NodeSet::default());
        exact.resize(len, NodeSet::default());
        out.insert("rank_f1".into(), real(rank_f1(&ours, &exact)?));
    }
    Ok(emit(Value::Object(out), &a.run))
}

fn bench_graph(a: &BenchArgs) -> Outcome<UncertainGraph> {
    if let Some(path) = &a.graph {
        return load_graph(path, &a.prob_model);
    }
    let range = ProbabilityRange { min_probability: a.min_prob };
    Ok(match a.generator {
        Generator::Er => erdos_renyi(a.nodes, a.edge_density, range, a.seed)?,
        Generator::Ba => barabasi_albert(a.nodes, a.attach, range, a.seed)?,
    })
}

fn na_or(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |x| format!("{x:.6}"))
}

fn bench(a: BenchArgs) -> Outcome<Rendered> {
    let graph = bench_graph(&a)?;
    let notion = notion(&a.run)?;
    let solver = solver(a.heuristic)?;
    let exact = match a.l_m {
        Some(l_m) => exact_topk_nds(&graph, &*notion, a.k, l_m),
        None => exact_topk(&graph, &*notion, a.k),
    };
    let reference: Option<Vec<NodeSet>> = match exact {
        Ok(r) => Some(r.into_iter().map(|(s, _)| s).collect()),
        Err(e) => {
            log::warn!("no exact reference ({e}); F1 is measured against the last rung");
            None
        }
    };

    let mut rungs: Vec<(u64, f64, Vec<NodeSet>)> = Vec::new();
    for theta in theta_ladder() {
        let start = Instant::now();
        let result = match a.l_m {
            Some(l_m) => estimate_topk_nds_with(&graph, &*notion, &*solver, a.k, l_m, theta, a.seed)?,
            None => estimate_topk_mpds_with(&graph, &*notion, &*solver, a.k, theta, a.seed)?,
        };
        rungs.push((theta, start.elapsed().as_secs_f64() * 1e3, result.sets()));
    }
    let reference = reference.unwrap_or_else(|| rungs.last().map(|r| r.2.clone()).unwrap_or_default());

    let mut text = String::from("theta\truntime_ms\tjaccard\tf1\n");
    for (i, (theta, ms, sets)) in rungs.iter().enumerate() {
        let jaccard = i.checked_sub(1).map(|p| topk_jaccard(&rungs[p].2, sets));
        let len = sets.len().max(reference.len());
        let f1 = if len == 0 {
            None
        } else {
            let (mut ours, mut truth) = (sets.clone(), reference.clone());
            ours.resize(len, NodeSet::default());
            truth.resize(len, NodeSet::default());
            Some(rank_f1(&ours, &truth)?)
        };
        text.push_str(&format!("{theta}\t{ms:.3}\t{}\t{}\n", na_or(jaccard), na_or(f1)));
    }
    Ok(Rendered { text, out: a.run.out.clone() })
}
