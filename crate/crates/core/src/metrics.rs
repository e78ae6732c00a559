//! Expected-density baseline and cohesion / agreement metrics.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::flow::{build_pattern_flow_network, full_saturation, max_flow, vertex_node};
use crate::motifs::{instance_edge_sets, MotifGroup};
use crate::nodeset::{NodeId, NodeSet};
use crate::notion::DensityNotion;
use crate::uncertain::UncertainGraph;

/// Instance weights are quantized to multiples of 1/WEIGHT_SCALE.
pub const WEIGHT_SCALE: f64 = 1e6;

/// Motif instances of `nodes`' induced skeleton, as (nodes, Π p(e)).
fn weighted_instances(graph: &UncertainGraph, nodes: &[NodeId], notion: &dyn DensityNotion) -> Vec<(Vec<NodeId>, f64)> {
    let (sub, map) = graph.skeleton().induced(nodes);
    instance_edge_sets(&sub, notion.template())
        .into_iter()
        .map(|edges| {
            let mut members: Vec<NodeId> = edges.iter().flat_map(|&(u, v)| [map[u as usize], map[v as usize]]).collect();
            members.sort_unstable();
            members.dedup();
            let weight = edges
                .iter()
                .map(|&(u, v)| graph.probability(map[u as usize], map[v as usize]).expect("skeleton edge"))
                .product();
            (members, weight)
        })
        .collect()
}

/// Expected motif count of the induced subgraph divided by its size.
pub fn expected_density(graph: &UncertainGraph, set: &NodeSet, notion: &dyn DensityNotion) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let total: f64 = weighted_instances(graph, set.as_slice(), notion).iter().map(|(_, w)| w).sum();
    Ok(total / set.len() as f64)
}

/// Quantized density Σ w / |U| of groups lying entirely inside `set`.
fn group_density(groups: &[MotifGroup], inside: &[bool]) -> Ratio<i64> {
    let count = inside.iter().filter(|&&b| b).count() as i64;
    let weight: u64 =
        groups.iter().filter(|g| g.nodes.iter().all(|&v| inside[v as usize])).map(|g| g.weight).sum();
    Ratio::new(weight as i64, count.max(1))
}

/// Largest subgraph maximizing expected density, with its exact expected
/// density. Found by parametric min cut over quantized instance weights:
/// each cut below full saturation yields a strictly denser set, so the
/// iteration ends at the optimum, where the maximal min-cut source side is
/// the largest maximizer.
pub fn expected_densest_subgraph(graph: &UncertainGraph, notion: &dyn DensityNotion) -> Result<(NodeSet, f64)> {
    let n = graph.node_count();
    let all: Vec<NodeId> = (0..n as NodeId).collect();
    let mut merged: BTreeMap<Vec<NodeId>, u64> = BTreeMap::new();
    for (nodes, w) in weighted_instances(graph, &all, notion) {
        *merged.entry(nodes).or_default() += (w * WEIGHT_SCALE).round() as u64;
    }
    let groups: Vec<MotifGroup> =
        merged.into_iter().filter(|(_, w)| *w > 0).map(|(nodes, weight)| MotifGroup { nodes, weight }).collect();
    if groups.is_empty() {
        return Ok((NodeSet::default(), 0.0));
    }
    let total: u64 = groups.iter().map(|g| g.weight).sum();
    let order = notion.order();

    let mut inside = vec![false; n];
    for g in &groups {
        for &v in &g.nodes {
            inside[v as usize] = true;
        }
    }
    let mut alpha = group_density(&groups, &inside);
    loop {
        let net = build_pattern_flow_network(n, order, &groups, alpha)?;
        let flow = max_flow(&net);
        if flow.value == full_saturation(order, total, net.scale())? {
            let reach = flow.reaches_sink(&net);
            let best = NodeSet::new((0..n as NodeId).filter(|&v| !reach[vertex_node(v as usize)]).collect());
            let eed = expected_density(graph, &best, notion)?;
            return Ok((best, eed));
        }
        let side = flow.source_side(&net);
        let denser: Vec<bool> = (0..n).map(|v| side[vertex_node(v)]).collect();
        let next = group_density(&groups, &denser);
        if next <= alpha {
            return Err(Error::Internal("expected-density search did not improve".into()));
        }
        alpha = next;
    }
}

/// Weighted edge mass over the number of possible edges.
pub fn probabilistic_density(graph: &UncertainGraph, set: &NodeSet) -> Result<f64> {
    let size = set.len();
    if size < 2 {
        return Err(Error::InvalidArgument("probabilistic density needs at least two nodes".into()));
    }
    let mass: f64 = graph.edges().iter().filter(|e| set.contains(e.u) && set.contains(e.v)).map(|e| e.p).sum();
    Ok(2.0 * mass / (size * (size - 1)) as f64)
}

/// Three times the weighted triangles over the weighted wedges; 0 when no
/// wedge exists.
pub fn probabilistic_clustering_coefficient(graph: &UncertainGraph, set: &NodeSet) -> f64 {
    let mut triangles = 0.0;
    let mut wedges = 0.0;
    for u in set.iter() {
        let nbrs: Vec<(NodeId, f64)> = graph.neighbors(u).iter().copied().filter(|&(v, _)| set.contains(v)).collect();
        for (i, &(v, pv)) in nbrs.iter().enumerate() {
            for &(w, pw) in &nbrs[i + 1..] {
                wedges += pv * pw;
                // Each triangle is seen from its smallest vertex only.
                if u < v && u < w {
                    if let Some(p) = graph.probability(v, w) {
                        triangles += pv * pw * p;
                    }
                }
            }
        }
    }
    if wedges == 0.0 {
        0.0
    } else {
        3.0 * triangles / wedges
    }
}

/// Largest fraction of the set drawn from a single community.
pub fn purity<C: Eq + std::hash::Hash>(set: &NodeSet, community_of: &HashMap<NodeId, C>) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sizes: HashMap<&C, usize> = HashMap::new();
    for v in set.iter() {
        let c = community_of.get(&v).ok_or_else(|| Error::InvalidArgument(format!("node {v} has no community label")))?;
        *sizes.entry(c).or_default() += 1;
    }
    Ok(*sizes.values().max().expect("non-empty") as f64 / set.len() as f64)
}

fn f1(found: &NodeSet, truth: &NodeSet) -> f64 {
    let common = found.intersection(truth).len();
    if common == 0 {
        return 0.0;
    }
    let precision = common as f64 / found.len() as f64;
    let recall = common as f64 / truth.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Mean over ranks of the F1 score between the sets at each rank.
pub fn rank_f1(ours: &[NodeSet], exact: &[NodeSet]) -> Result<f64> {
    if ours.len() != exact.len() {
        return Err(Error::InvalidArgument(format!("ranking lengths differ: {} vs {}", ours.len(), exact.len())));
    }
    if ours.is_empty() {
        return Err(Error::InvalidArgument("empty rankings".into()));
    }
    Ok(ours.iter().zip(exact).map(|(a, b)| f1(a, b)).sum::<f64>() / ours.len() as f64)
}

/// Parses "node community" lines; blank lines and `#` comments are skipped.
pub fn parse_labels(text: &str) -> Result<BTreeMap<u64, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(node), Some(community), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse { line: i + 1, msg: "expected `node community`".into() });
        };
        let node = node.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad node id `{node}`") })?;
        out.insert(node, community.to_string());
    }
    Ok(out)
}

pub fn load_labels(path: impl AsRef<Path>) -> Result<BTreeMap<u64, String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_labels(&text)
}
