//! Per-world densest subgraphs: peeling bound, core pruning, exact optimum
//! by parametric min-cut, and enumeration of every densest subgraph from the
//! residual component DAG.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::flow::{full_saturation, max_flow, residual_scc_dag, vertex_node, ComponentDag, MaxFlow};
use crate::graph::Graph;
use crate::motifs::MotifGroup;
use crate::nodeset::{NodeId, NodeSet};
use crate::notion::{DensityNotion, MotifIndex};
use crate::rational::{ceil_to_u64, density, snap_to_fraction, Density};

/// Default cap on densest subgraphs enumerated in one world.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensestResult {
    pub optimum: Density,
    pub all_densest: Vec<NodeSet>,
    /// Union of all densest subgraphs (itself densest).
    pub maximal: NodeSet,
    /// The world has no motif at all: every singleton ties at density 0.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalDensest {
    pub optimum: Density,
    pub maximal: NodeSet,
    pub degenerate: bool,
}

/// Removal order of min-degree peeling with running densities.
#[derive(Clone, Debug)]
pub struct PeelTrace {
    /// Vertices in removal order.
    pub order: Vec<NodeId>,
    /// `density[i]`: density of the vertices `order[i..]`.
    pub density: Vec<Density>,
    /// Core number of `order[i]`: running maximum of removal degrees.
    pub core: Vec<u64>,
}

impl PeelTrace {
    pub fn best(&self) -> Density {
        self.density.iter().copied().max().unwrap_or_else(|| Density::from_integer(0))
    }
}

/// For each vertex, indices of the groups containing it.
fn incidence(n: usize, groups: &[MotifGroup]) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (i, g) in groups.iter().enumerate() {
        for &v in &g.nodes {
            inc[v as usize].push(i);
        }
    }
    inc
}

/// Repeatedly removes a minimum motif-degree vertex (ties: lowest id).
pub fn peel(index: &dyn MotifIndex) -> PeelTrace {
    let n = index.degrees().len();
    let groups = index.groups();
    let inc = incidence(n, groups);
    let mut degree = index.degrees().to_vec();
    let mut alive_group = vec![true; groups.len()];
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(u64, NodeId)>> =
        (0..n).map(|v| Reverse((degree[v], v as NodeId))).collect();
    let mut total = index.total();
    let mut trace = PeelTrace { order: Vec::with_capacity(n), density: Vec::with_capacity(n), core: Vec::with_capacity(n) };
    let mut running = 0;
    while let Some(Reverse((d, v))) = heap.pop() {
        let vi = v as usize;
        if removed[vi] || d != degree[vi] {
            continue;
        }
        trace.density.push(density(total, n - trace.order.len()));
        running = running.max(d);
        trace.core.push(running);
        trace.order.push(v);
        removed[vi] = true;
        for &gi in &inc[vi] {
            if !alive_group[gi] {
                continue;
            }
            alive_group[gi] = false;
            let w = groups[gi].weight;
            total -= w;
            for &u in &groups[gi].nodes {
                if u != v {
                    degree[u as usize] -= w;
                    heap.push(Reverse((degree[u as usize], u)));
                }
            }
        }
        degree[vi] = 0;
    }
    trace
}

/// Peeling lower bound ρ̃ ≤ ρ*.
pub fn peel_lower_bound(g: &Graph, notion: &dyn DensityNotion) -> Result<Density> {
    Ok(peel(&*notion.index(g)?).best())
}

/// Vertices of the k-core w.r.t. motif degree, ascending.
fn core_members(index: &dyn MotifIndex, k: u64) -> Vec<NodeId> {
    let n = index.degrees().len();
    let groups = index.groups();
    let inc = incidence(n, groups);
    let mut degree = index.degrees().to_vec();
    let mut alive_group = vec![true; groups.len()];
    let mut removed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    for &v in &queue {
        removed[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &gi in &inc[v] {
            if !alive_group[gi] {
                continue;
            }
            alive_group[gi] = false;
            for &u in &groups[gi].nodes {
                let u = u as usize;
                if u != v && !removed[u] {
                    degree[u] -= groups[gi].weight;
                    if degree[u] < k {
                        removed[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    (0..n).filter(|&v| !removed[v]).map(|v| v as NodeId).collect()
}

/// Maximal subgraph whose vertices all have motif degree ≥ k within it.
/// Returns the induced subgraph and the map from its ids back to `g`'s.
pub fn core_prune(g: &Graph, notion: &dyn DensityNotion, k: u64) -> Result<(Graph, Vec<NodeId>)> {
    let index = notion.index(g)?;
    Ok(g.induced(&core_members(&*index, k)))
}

/// A world reduced to its ⌈ρ̃⌉-core with the exact optimum found.
struct Solved {
    map: Vec<NodeId>,
    index: Box<dyn MotifIndex>,
    optimum: Density,
}

/// `None` for a motif-free world.
fn solve(g: &Graph, notion: &dyn DensityNotion) -> Result<Option<Solved>> {
    let index = notion.index(g)?;
    if index.total() == 0 {
        return Ok(None);
    }
    let lower = peel(&*index).best();
    let kept = core_members(&*index, ceil_to_u64(lower));
    let (core, map) = g.induced(&kept);
    let index = notion.index(&core)?;
    let n = core.node_count() as i64;
    let optimum = search_optimum(&*index, n, lower)?;
    Ok(Some(Solved { map, index, optimum }))
}

/// True when some vertex set is strictly denser than `alpha`.
fn denser_than(index: &dyn MotifIndex, alpha: Density) -> Result<bool> {
    let net = index.flow_network(alpha)?;
    let full = full_saturation(index.order(), index.total(), net.scale())?;
    Ok(max_flow(&net).value < full)
}

/// Binary search on the grid j/n² followed by snapping. Invariant: some set
/// is denser than lo/n² and none is denser than hi/n²; the final interval
/// (lo, lo+1]/n² holds exactly one fraction with denominator ≤ n.
fn search_optimum(index: &dyn MotifIndex, n: i64, lower: Density) -> Result<Density> {
    let grid = n.checked_mul(n).ok_or(Error::CapacityOverflow)?;
    let scaled = lower * Density::from_integer(grid);
    let mut lo = scaled.ceil().to_integer() - 1;
    let mut hi = (index.total() as i64).checked_mul(grid).ok_or(Error::CapacityOverflow)?;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if denser_than(index, Density::new(mid, grid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    snap_to_fraction(Density::new(lo.max(0), grid), Density::new(hi, grid), n)
}

/// Max flow at the optimum, checked to saturate every source arc.
fn optimum_flow(solved: &Solved) -> Result<(crate::flow::FlowNetwork, MaxFlow)> {
    let net = solved.index.flow_network(solved.optimum)?;
    let flow = max_flow(&net);
    let full = full_saturation(solved.index.order(), solved.index.total(), net.scale())?;
    if flow.value != full {
        return Err(Error::Internal(format!(
            "min cut {} below full saturation {full} at the snapped optimum {}",
            flow.value, solved.optimum
        )));
    }
    Ok((net, flow))
}

/// Vertices (core ids) that cannot reach the sink in the residual graph:
/// the source side of the min cut farthest from s.
fn maximal_core_vertices(net: &crate::flow::FlowNetwork, flow: &MaxFlow, n: usize) -> Vec<NodeId> {
    let reach = flow.reaches_sink(net);
    (0..n).filter(|&v| !reach[vertex_node(v)]).map(|v| v as NodeId).collect()
}

fn map_back(map: &[NodeId], local: impl IntoIterator<Item = NodeId>) -> NodeSet {
    local.into_iter().map(|v| map[v as usize]).collect()
}

fn degenerate_result(n: usize, cap: usize) -> DensestResult {
    let all_densest = if n <= cap { (0..n as NodeId).map(|v| NodeSet::from([v])).collect() } else { Vec::new() };
    DensestResult {
        optimum: Density::from_integer(0),
        all_densest,
        maximal: (0..n as NodeId).collect(),
        degenerate: true,
    }
}

/// Exact optimum density ρ* (0 for a motif-free world).
pub fn optimal_density(g: &Graph, notion: &dyn DensityNotion) -> Result<Density> {
    Ok(solve(g, notion)?.map_or_else(|| Density::from_integer(0), |s| s.optimum))
}

pub fn enumerate_all_densest(g: &Graph, notion: &dyn DensityNotion) -> Result<DensestResult> {
    enumerate_all_densest_capped(g, notion, DEFAULT_ENUMERATION_CAP)
}

/// Every densest subgraph, each exactly once, in ascending order of the
/// first component chosen.
pub fn enumerate_all_densest_capped(g: &Graph, notion: &dyn DensityNotion, cap: usize) -> Result<DensestResult> {
    let Some(solved) = solve(g, notion)? else {
        return Ok(degenerate_result(g.node_count(), cap));
    };
    let (net, flow) = optimum_flow(&solved)?;
    let dag = residual_scc_dag(&net, &flow);
    let maximal = map_back(&solved.map, maximal_core_vertices(&net, &flow, solved.map.len()));
    let all_densest = enumerate_closures(&dag, &solved.map, cap)?;
    Ok(DensestResult { optimum: solved.optimum, all_densest, maximal, degenerate: false })
}

/// Walks independent component sets (antichains of the residual DAG over
/// components containing graph vertices). Each antichain's downward closure
/// is one minimum cut; its vertices form one densest subgraph.
fn enumerate_closures(dag: &ComponentDag, map: &[NodeId], cap: usize) -> Result<Vec<NodeSet>> {
    let n = dag.len();
    let des = dag.descendants();
    let anc = dag.ancestors();
    let mut candidates = FixedBitSet::with_capacity(n);
    for c in 0..n {
        if !dag.is_trivial(c) && !dag.vertex_mask[c].is_empty() {
            candidates.insert(c);
        }
    }
    let mut seen = BTreeSet::new();
    let mut found = Vec::new();
    // Frames: (closure so far, components still allowed).
    let mut stack = vec![(FixedBitSet::with_capacity(n), candidates, true)];
    while let Some((closure, allowed, is_root)) = stack.pop() {
        if !is_root {
            let set = map_back(map, closure.ones().flat_map(|c| dag.vertex_mask[c].iter().copied()));
            if seen.insert(set.clone()) {
                found.push(set);
                if found.len() > cap {
                    found.pop();
                    return Err(Error::EnumerationCap { cap, partial: found });
                }
            }
        }
        let mut children = Vec::new();
        for c in allowed.ones() {
            let mut child_closure = closure.clone();
            child_closure.insert(c);
            child_closure.union_with(&des[c]);
            let mut child_allowed = allowed.clone();
            child_allowed.set_range(..c + 1, false);
            child_allowed.difference_with(&des[c]);
            child_allowed.difference_with(&anc[c]);
            children.push((child_closure, child_allowed, false));
        }
        stack.extend(children.into_iter().rev());
    }
    Ok(found)
}

/// Union of all densest subgraphs, read off the residual graph without
/// enumerating them.
pub fn maximal_densest(g: &Graph, notion: &dyn DensityNotion) -> Result<MaximalDensest> {
    let Some(solved) = solve(g, notion)? else {
        return Ok(MaximalDensest {
            optimum: Density::from_integer(0),
            maximal: (0..g.node_count() as NodeId).collect(),
            degenerate: true,
        });
    };
    let (net, flow) = optimum_flow(&solved)?;
    let maximal = map_back(&solved.map, maximal_core_vertices(&net, &flow, solved.map.len()));
    Ok(MaximalDensest { optimum: solved.optimum, maximal, degenerate: false })
}

/// Dense subgraphs from core decomposition alone: the innermost core plus
/// every peeling suffix strictly denser than it. Each has density at least
/// ρ*/order. Empty for a motif-free world.
pub fn heuristic_pattern_dense(g: &Graph, notion: &dyn DensityNotion) -> Result<Vec<NodeSet>> {
    let index = notion.index(g)?;
    if index.total() == 0 {
        return Ok(Vec::new());
    }
    let trace = peel(&*index);
    let k_max = trace.core.last().copied().unwrap_or(0);
    let start = trace.core.iter().position(|&c| c == k_max).unwrap_or(0);
    let core_density = trace.density[start];
    let mut out = vec![NodeSet::new(trace.order[start..].to_vec())];
    for i in 0..trace.order.len() {
        if i != start && trace.density[i] > core_density {
            out.push(NodeSet::new(trace.order[i..].to_vec()));
        }
    }
    Ok(out)
}

/// The innermost core alone.
pub fn heuristic_core(g: &Graph, notion: &dyn DensityNotion) -> Result<Option<NodeSet>> {
    Ok(heuristic_pattern_dense(g, notion)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notion::NotionRegistry;

    fn notion(spec: &str) -> std::sync::Arc<dyn DensityNotion> {
        NotionRegistry::default().parse(spec).unwrap()
    }

    fn bridged_triangles() -> Graph {
        Graph::new(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    fn sets(list: &[&[NodeId]]) -> BTreeSet<NodeSet> {
        list.iter().map(|s| NodeSet::new(s.to_vec())).collect()
    }

    #[test]
    fn peeling_bounds() {
        let edge = notion("edge");
        let tri = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(peel_lower_bound(&tri, &*edge).unwrap(), Density::from_integer(1));
        let star = Graph::new(6, (1..6).map(|v| (0, v))).unwrap();
        assert_eq!(peel_lower_bound(&star, &*edge).unwrap(), Density::new(5, 6));
        assert_eq!(optimal_density(&star, &*edge).unwrap(), Density::new(5, 6));
        assert_eq!(peel_lower_bound(&Graph::empty(3), &*edge).unwrap(), Density::from_integer(0));
    }

    #[test]
    fn pruning() {
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (core, map) = core_prune(&k4, &*notion("clique:3"), 3).unwrap();
        assert_eq!((core.node_count(), map), (4, vec![0, 1, 2, 3]));
        let pendant = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let (core, map) = core_prune(&pendant, &*notion("edge"), 2).unwrap();
        assert_eq!((core.edge_count(), map), (3, vec![0, 1, 2]));
        let (core, _) = core_prune(&pendant, &*notion("edge"), 0).unwrap();
        assert_eq!(core, pendant);
    }

    #[test]
    fn optimum_values() {
        let edge = notion("edge");
        let tri = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(optimal_density(&tri, &*edge).unwrap(), Density::from_integer(1));
        let full = Graph::new(4, [(0, 1), (0, 2), (1, 3)]).unwrap();
        assert_eq!(optimal_density(&full, &*edge).unwrap(), Density::new(3, 4));
        assert_eq!(optimal_density(&bridged_triangles(), &*notion("clique:3")).unwrap(), Density::new(1, 3));
    }

    #[test]
    fn two_edge_world() {
        let two_edges = Graph::new(4, [(0, 2), (1, 3)]).unwrap();
        let r = enumerate_all_densest(&two_edges, &*notion("edge")).unwrap();
        assert_eq!(r.optimum, Density::new(1, 2));
        assert_eq!(r.all_densest.iter().cloned().collect::<BTreeSet<_>>(), sets(&[&[0, 2], &[1, 3], &[0, 1, 2, 3]]));
        assert_eq!(r.all_densest.len(), 3);
        assert_eq!(r.maximal, NodeSet::from([0, 1, 2, 3]));
        assert_eq!(maximal_densest(&two_edges, &*notion("edge")).unwrap().maximal, r.maximal);
    }

    #[test]
    fn bridged_triangles_cliques() {
        let r = enumerate_all_densest(&bridged_triangles(), &*notion("clique:3")).unwrap();
        assert_eq!(r.optimum, Density::new(1, 3));
        assert_eq!(
            r.all_densest.iter().cloned().collect::<BTreeSet<_>>(),
            sets(&[&[0, 1, 2], &[3, 4, 5], &[0, 1, 2, 3, 4, 5]])
        );
        assert_eq!(r.all_densest.len(), 3);
    }

    #[test]
    fn single_edge_and_degenerate() {
        let g = Graph::new(3, [(0, 2)]).unwrap();
        let r = enumerate_all_densest(&g, &*notion("edge")).unwrap();
        assert_eq!(r.all_densest, vec![NodeSet::from([0, 2])]);
        assert_eq!(r.maximal, NodeSet::from([0, 2]));
        let r = enumerate_all_densest(&Graph::empty(3), &*notion("edge")).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.all_densest.len(), 3);
    }

    #[test]
    fn enumeration_cap_returns_partial() {
        // Three disjoint edges: 7 densest subgraphs.
        let g = Graph::new(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(enumerate_all_densest(&g, &*notion("edge")).unwrap().all_densest.len(), 7);
        match enumerate_all_densest_capped(&g, &*notion("edge"), 4) {
            Err(Error::EnumerationCap { cap: 4, partial }) => assert_eq!(partial.len(), 4),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn heuristic_examples() {
        let tri = notion("pattern:triangle");
        let g = bridged_triangles();
        let opt = optimal_density(&g, &*tri).unwrap();
        let out = heuristic_pattern_dense(&g, &*tri).unwrap();
        assert!(!out.is_empty());
        for s in &out {
            assert!(induced_density(&g, s, &*tri) * Density::from_integer(3) >= opt);
        }
        assert!(heuristic_pattern_dense(&Graph::new(3, [(0, 1)]).unwrap(), &*tri).unwrap().is_empty());
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(heuristic_pattern_dense(&k4, &*tri).unwrap(), vec![NodeSet::from([0, 1, 2, 3])]);
    }

    fn induced_density(g: &Graph, s: &NodeSet, n: &dyn DensityNotion) -> Density {
        crate::notion::induced_density(g, s, n).unwrap()
    }
}
