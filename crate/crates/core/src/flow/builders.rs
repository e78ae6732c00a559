//! Parametric networks whose minimum cut tests "is some subgraph denser
//! than α?". With α = a/b every capacity is multiplied by b, and a vertex
//! set V1 on the source side costs `k·b·(μ + (α − ρ(V1))·|V1|)`, where k is
//! the motif order. The all-source-arcs cut `k·μ·b` is therefore minimum
//! exactly when no set is denser than α.

use super::network::{mul, vertex_node, Capacity, FlowNetwork, NetworkBuilder, SINK, SOURCE};
use crate::error::Result;
use crate::graph::Graph;
use crate::motifs::{CliqueIndex, MotifGroup};
use crate::rational::Density;

/// Goldberg's network: s→v deg(v)·b, v→t 2a, both directions of each edge b.
pub fn build_edge_flow_network(g: &Graph, alpha: Density) -> Result<FlowNetwork> {
    let (a, b) = (*alpha.numer(), *alpha.denom());
    let n = g.node_count();
    let mut net = NetworkBuilder::new(n, b);
    let sink = mul(2, a)?;
    for v in 0..n {
        net.add_arc(SOURCE, vertex_node(v), Capacity::Finite(mul(g.degree(v as u32) as i64, b)?));
        net.add_arc(vertex_node(v), SINK, Capacity::Finite(sink));
    }
    for &(u, v) in g.edges() {
        net.add_arc(vertex_node(u as usize), vertex_node(v as usize), Capacity::Finite(b));
        net.add_arc(vertex_node(v as usize), vertex_node(u as usize), Capacity::Finite(b));
    }
    net.build()
}

/// Clique network: one node per (h−1)-clique λ; λ→v infinite for v ∈ λ and
/// v→λ capacity b when v completes λ.
pub fn build_clique_flow_network(n: usize, index: &CliqueIndex, alpha: Density) -> Result<FlowNetwork> {
    let (a, b) = (*alpha.numer(), *alpha.denom());
    let mut net = NetworkBuilder::new(n, b);
    let sink = mul(index.h() as i64, a)?;
    for (v, &deg) in index.degrees().iter().enumerate() {
        net.add_arc(SOURCE, vertex_node(v), Capacity::Finite(mul(deg as i64, b)?));
        net.add_arc(vertex_node(v), SINK, Capacity::Finite(sink));
    }
    for lambda in index.lambdas() {
        let node = net.add_node();
        for &v in &lambda.nodes {
            net.add_arc(node, vertex_node(v as usize), Capacity::Infinite);
        }
        for &v in &lambda.completions {
            net.add_arc(vertex_node(v as usize), node, Capacity::Finite(b));
        }
    }
    net.build()
}

/// Pattern network over weighted instance groups of order `k`: λ'→v'
/// capacity |g|(k−1)·b and v'→λ' capacity |g|·b for each v' in the group.
/// Vertex degrees are the weighted group counts.
pub fn build_pattern_flow_network(
    n: usize,
    k: usize,
    groups: &[MotifGroup],
    alpha: Density,
) -> Result<FlowNetwork> {
    let (a, b) = (*alpha.numer(), *alpha.denom());
    let mut degrees = vec![0i64; n];
    for g in groups {
        for &v in &g.nodes {
            degrees[v as usize] = degrees[v as usize].checked_add(g.weight as i64).ok_or(crate::Error::CapacityOverflow)?;
        }
    }
    let mut net = NetworkBuilder::new(n, b);
    let sink = mul(k as i64, a)?;
    for (v, &deg) in degrees.iter().enumerate() {
        net.add_arc(SOURCE, vertex_node(v), Capacity::Finite(mul(deg, b)?));
        net.add_arc(vertex_node(v), SINK, Capacity::Finite(sink));
    }
    for g in groups {
        let node = net.add_node();
        let w = mul(g.weight as i64, b)?;
        let back = mul(w, k as i64 - 1)?;
        for &v in &g.nodes {
            net.add_arc(node, vertex_node(v as usize), Capacity::Finite(back));
            net.add_arc(vertex_node(v as usize), node, Capacity::Finite(w));
        }
    }
    net.build()
}

/// Cut value of the all-source-arcs cut: `k·μ·b`.
pub fn full_saturation(order: usize, total: u64, scale: i64) -> Result<i64> {
    mul(mul(order as i64, total as i64)?, scale)
}
