//! Exact ground truth by exhaustive enumeration of possible worlds and node
//! subsets. Shares no code with the flow-based engine: motif instances are
//! found by plain backtracking and densities compared by cross-multiplying.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::{NodeId, NodeSet};
use crate::notion::DensityNotion;
use crate::pattern::Pattern;
use crate::rational::Density;
use crate::uncertain::UncertainGraph;

pub const MAX_ORACLE_EDGES: usize = 20;
pub const MAX_ORACLE_NODES: usize = 16;
pub const MAX_TOPK_NODES: usize = 10;

/// Worlds per parallel chunk; fixed so sums do not depend on thread count.
const CHUNK: u64 = 1 << 12;

/// One motif instance as node and edge bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Instance {
    nodes: u32,
    edges: u64,
}

/// Every distinct instance of `pattern` in `g` (edge ids = positions in
/// `g.edges()`), by backtracking in pattern-vertex order.
fn skeleton_instances(g: &Graph, pattern: &Pattern) -> Vec<Instance> {
    let k = pattern.node_count();
    let n = g.node_count();
    let edge_id: BTreeMap<(NodeId, NodeId), u32> =
        g.edges().iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let mut found = BTreeSet::new();
    let mut image = vec![0 as NodeId; k];

    fn assign(
        i: usize,
        g: &Graph,
        pattern: &Pattern,
        edge_id: &BTreeMap<(NodeId, NodeId), u32>,
        image: &mut Vec<NodeId>,
        found: &mut BTreeSet<Instance>,
    ) {
        let k = pattern.node_count();
        if i == k {
            let mut inst = Instance { nodes: 0, edges: 0 };
            for &v in image.iter() {
                inst.nodes |= 1 << v;
            }
            for &(a, b) in pattern.edges() {
                let (x, y) = (image[a as usize], image[b as usize]);
                inst.edges |= 1u64 << edge_id[&(x.min(y), x.max(y))];
            }
            found.insert(inst);
            return;
        }
        for x in 0..g.node_count() as NodeId {
            if image[..i].contains(&x) {
                continue;
            }
            let fits = pattern
                .edges()
                .iter()
                .filter(|&&(a, b)| (a as usize == i && (b as usize) < i) || (b as usize == i && (a as usize) < i))
                .all(|&(a, b)| {
                    let other = if a as usize == i { b } else { a };
                    g.has_edge(image[other as usize], x)
                });
            if fits {
                image[i] = x;
                assign(i + 1, g, pattern, edge_id, image, found);
            }
        }
    }

    if k <= n {
        assign(0, g, pattern, &edge_id, &mut image, &mut found);
    }
    found.into_iter().collect()
}

/// Motif counts of every induced subgraph: `count[S]` for each node mask.
fn subset_counts(n: usize, instances: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut count = vec![0u32; 1 << n];
    for nodes in instances {
        count[nodes as usize] += 1;
    }
    for bit in 0..n {
        for s in 0..1usize << n {
            if s >> bit & 1 == 1 {
                count[s] += count[s ^ 1 << bit];
            }
        }
    }
    count
}

/// Maximum density over nonempty subsets and all masks attaining it;
/// `None` when there is no motif at all.
fn densest_masks(n: usize, count: &[u32]) -> Option<(Density, Vec<u32>)> {
    let mut best = (0u32, 1u32);
    let mut masks = Vec::new();
    for (s, &c) in count.iter().enumerate().take(1 << n).skip(1) {
        let size = s.count_ones();
        if c == 0 {
            continue;
        }
        match (c as u64 * best.1 as u64).cmp(&(best.0 as u64 * size as u64)) {
            Ordering::Greater => {
                best = (c, size);
                masks.clear();
                masks.push(s as u32);
            }
            Ordering::Equal => masks.push(s as u32),
            Ordering::Less => {}
        }
    }
    (best.0 > 0).then(|| (Density::new(best.0 as i64, best.1 as i64), masks))
}

/// Optimum and every densest subgraph of a deterministic graph by subset
/// scan; `(0, [])` when the graph has no motif.
pub fn brute_force_densest(g: &Graph, pattern: &Pattern) -> Result<(Density, Vec<NodeSet>)> {
    let n = g.node_count();
    if n > MAX_ORACLE_NODES || g.edge_count() > 64 {
        return Err(Error::TooLarge(format!("{n} nodes, {} edges", g.edge_count())));
    }
    let instances = skeleton_instances(g, pattern);
    let count = subset_counts(n, instances.iter().map(|i| i.nodes));
    Ok(match densest_masks(n, &count) {
        None => (Density::from_integer(0), Vec::new()),
        Some((rho, masks)) => (rho, masks.into_iter().map(|m| NodeSet::from_mask(m as u64)).collect()),
    })
}

/// Motif count of `g[set]` by brute force.
pub fn brute_force_count(g: &Graph, pattern: &Pattern, set: &NodeSet) -> u64 {
    let mask = set.to_mask().unwrap_or(0) as u32;
    skeleton_instances(g, pattern).iter().filter(|i| i.nodes & !mask == 0).count() as u64
}

/// Per-world outcome table for an uncertain graph.
#[derive(Clone, Debug)]
pub struct WorldTable {
    node_count: usize,
    /// τ for every node mask.
    tau: Vec<f64>,
    /// (Pr(G), union of densest masks) for each non-degenerate world.
    worlds: Vec<(f64, u32)>,
}

impl WorldTable {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn tau(&self, set: &NodeSet) -> f64 {
        match set.to_mask() {
            Some(m) if (m as usize) < self.tau.len() && !set.is_empty() => self.tau[m as usize],
            _ => 0.0,
        }
    }

    pub fn gamma(&self, set: &NodeSet) -> f64 {
        let Some(mask) = set.to_mask().filter(|&m| m >> self.node_count == 0) else { return 0.0 };
        self.worlds.iter().filter(|(_, w)| mask & !(*w as u64) == 0).map(|(p, _)| p).sum()
    }

    /// Non-degenerate worlds as (probability, maximal densest subgraph).
    pub fn worlds(&self) -> impl Iterator<Item = (f64, NodeSet)> + '_ {
        self.worlds.iter().map(|&(p, m)| (p, NodeSet::from_mask(m as u64)))
    }

    /// Probabilities of the worlds whose maximal densest subgraph contains
    /// `set`.
    pub fn containing_worlds(&self, set: &NodeSet) -> Vec<f64> {
        let mask = set.to_mask().unwrap_or(u64::MAX);
        self.worlds.iter().filter(|(_, w)| mask & !(*w as u64) == 0).map(|&(p, _)| p).collect()
    }

    /// Sets with positive τ, by τ descending then lexicographic.
    pub fn ranked_tau(&self) -> Vec<(NodeSet, f64)> {
        let mut out: Vec<(NodeSet, f64)> = self
            .tau
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t > 0.0)
            .map(|(m, &t)| (NodeSet::from_mask(m as u64), t))
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Every set closed w.r.t. γ: the intersections of maximal densest
    /// subgraphs over collections of worlds, with their γ.
    pub fn closed_sets(&self) -> Vec<(NodeSet, f64)> {
        let mut closed: BTreeSet<u32> = BTreeSet::new();
        let distinct: BTreeSet<u32> = self.worlds.iter().map(|&(_, m)| m).collect();
        for &t in &distinct {
            let mut next: BTreeSet<u32> = closed.iter().map(|&c| c & t).collect();
            next.extend(closed.iter().copied());
            next.insert(t);
            closed = next;
        }
        closed
            .into_iter()
            .filter(|&c| c != 0)
            .map(|c| {
                let set = NodeSet::from_mask(c as u64);
                let g = self.gamma(&set);
                (set, g)
            })
            .collect()
    }
}

fn check_limits(g: &UncertainGraph, max_nodes: usize) -> Result<()> {
    if g.edge_count() > MAX_ORACLE_EDGES {
        return Err(Error::TooLarge(format!("{} edges (limit {MAX_ORACLE_EDGES})", g.edge_count())));
    }
    if g.node_count() > max_nodes {
        return Err(Error::TooLarge(format!("{} nodes (limit {max_nodes})", g.node_count())));
    }
    Ok(())
}

/// One chunk's τ sums and its (probability, maximal densest mask) worlds.
type ChunkTally = (Vec<f64>, Vec<(f64, u32)>);

/// Enumerates all 2^m worlds in Gray-code order.
pub fn world_table(g: &UncertainGraph, notion: &dyn DensityNotion) -> Result<WorldTable> {
    check_limits(g, MAX_ORACLE_NODES)?;
    let n = g.node_count();
    let m = g.edge_count();
    let instances = skeleton_instances(&g.skeleton(), notion.template());
    let probs: Vec<f64> = g.edges().iter().map(|e| e.p).collect();
    let total = 1u64 << m;
    let chunks: Vec<ChunkTally> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut tau = vec![0.0; 1 << n];
            let mut worlds = Vec::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let mask = i ^ i >> 1;
                let prob: f64 = probs
                    .iter()
                    .enumerate()
                    .map(|(e, &p)| if mask >> e & 1 == 1 { p } else { 1.0 - p })
                    .product();
                if prob == 0.0 {
                    continue;
                }
                let present = instances.iter().filter(|inst| inst.edges & !mask == 0).map(|inst| inst.nodes);
                let count = subset_counts(n, present);
                if let Some((_, masks)) = densest_masks(n, &count) {
                    let mut union = 0;
                    for s in masks {
                        tau[s as usize] += prob;
                        union |= s;
                    }
                    worlds.push((prob, union));
                }
            }
            (tau, worlds)
        })
        .collect();
    let mut tau = vec![0.0; 1 << n];
    let mut worlds = Vec::new();
    for (t, w) in chunks {
        for (acc, x) in tau.iter_mut().zip(t) {
            *acc += x;
        }
        worlds.extend(w);
    }
    Ok(WorldTable { node_count: n, tau, worlds })
}

fn check_set(g: &UncertainGraph, set: &NodeSet) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    match set.iter().find(|&v| v as usize >= g.node_count()) {
        Some(v) => Err(Error::InvalidArgument(format!("node {v} not in graph"))),
        None => Ok(()),
    }
}

/// Probability that `set` induces a densest subgraph.
pub fn exact_tau(g: &UncertainGraph, set: &NodeSet, notion: &dyn DensityNotion) -> Result<f64> {
    check_set(g, set)?;
    Ok(world_table(g, notion)?.tau(set))
}

/// Probability that `set` lies inside some densest subgraph.
pub fn exact_gamma(g: &UncertainGraph, set: &NodeSet, notion: &dyn DensityNotion) -> Result<f64> {
    check_set(g, set)?;
    Ok(world_table(g, notion)?.gamma(set))
}

/// True top-k sets by τ (ties lexicographic).
pub fn exact_topk(g: &UncertainGraph, notion: &dyn DensityNotion, k: usize) -> Result<Vec<(NodeSet, f64)>> {
    check_limits(g, MAX_TOPK_NODES)?;
    let mut ranked = world_table(g, notion)?.ranked_tau();
    ranked.truncate(k);
    Ok(ranked)
}

/// True top-k closed sets of size ≥ `l_m` by γ (ties: larger, then
/// lexicographic).
pub fn exact_topk_nds(
    g: &UncertainGraph,
    notion: &dyn DensityNotion,
    k: usize,
    l_m: usize,
) -> Result<Vec<(NodeSet, f64)>> {
    check_limits(g, MAX_TOPK_NODES)?;
    Ok(topk_closed(&world_table(g, notion)?, k, l_m))
}

pub fn topk_closed(table: &WorldTable, k: usize, l_m: usize) -> Vec<(NodeSet, f64)> {
    let mut closed: Vec<(NodeSet, f64)> = table.closed_sets().into_iter().filter(|(s, _)| s.len() >= l_m).collect();
    closed.sort_by(|a, b| b.1.total_cmp(&a.1).then(b.0.len().cmp(&a.0.len())).then_with(|| a.0.cmp(&b.0)));
    closed.truncate(k);
    closed
}

/// Checks τ({v1, v2}) = 0.5^m · #matchings(G) on the augmented uncertain
/// graph (all edges 0.5, plus a certain edge v1v2). Also checks that the
/// "every degree ≤ 1" shortcut gives the same left-hand side.
pub fn matching_identity_check(det: &Graph) -> Result<(f64, f64)> {
    let m = det.edge_count();
    if m > 18 {
        return Err(Error::TooLarge(format!("{m} edges (limit 18)")));
    }
    let n = det.node_count();
    let (v1, v2) = (n as NodeId, n as NodeId + 1);
    let mut edges: Vec<(NodeId, NodeId, f64)> = det.edges().iter().map(|&(u, v)| (u, v, 0.5)).collect();
    edges.push((v1, v2, 1.0));
    let augmented = UncertainGraph::new(n + 2, edges)?;
    let edge_notion = crate::notion::EdgeNotion::new();
    let lhs = exact_tau(&augmented, &NodeSet::from([v1, v2]), &edge_notion)?;

    let mut matchings = 0u64;
    let mut shortcut = 0.0;
    for mask in 0u32..1 << m {
        let mut degree = vec![0u8; n];
        for (i, &(u, v)) in det.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
        if degree.iter().all(|&d| d <= 1) {
            matchings += 1;
            shortcut += 0.5f64.powi(m as i32);
        }
    }
    let rhs = 0.5f64.powi(m as i32) * matchings as f64;
    if shortcut != lhs {
        return Err(Error::Internal(format!("degree shortcut {shortcut} disagrees with exhaustive τ {lhs}")));
    }
    Ok((lhs, rhs))
}
