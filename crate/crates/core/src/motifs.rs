//! Motif enumeration: h-cliques with their (h−1)-clique completions, and
//! non-induced pattern instances grouped by node set.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeId;
use crate::pattern::Pattern;

/// Default cap on pattern size for instance enumeration.
pub const DEFAULT_PATTERN_CAP: usize = 6;

/// Motif instances sharing one node set, with their multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MotifGroup {
    pub nodes: Vec<NodeId>,
    pub weight: u64,
}

/// An (h−1)-clique and the vertices that complete it to an h-clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda {
    pub nodes: Vec<NodeId>,
    pub completions: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct CliqueIndex {
    h: usize,
    cliques: Vec<MotifGroup>,
    lambdas: Vec<Lambda>,
    degrees: Vec<u64>,
}

impl CliqueIndex {
    pub fn h(&self) -> usize {
        self.h
    }

    /// Every h-clique as a sorted tuple (weight 1), sorted.
    pub fn cliques(&self) -> &[MotifGroup] {
        &self.cliques
    }

    pub fn lambdas(&self) -> &[Lambda] {
        &self.lambdas
    }

    /// Clique degree of each vertex.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn count(&self) -> u64 {
        self.cliques.len() as u64
    }
}

/// Lists every h-clique once, by recursive intersection of out-neighbour
/// sets under a degeneracy orientation.
pub fn list_h_cliques(g: &Graph, h: usize) -> Result<CliqueIndex> {
    if h < 2 {
        return Err(Error::InvalidArgument(format!("clique size must be at least 2, got {h}")));
    }
    let n = g.node_count();
    let rank = degeneracy_rank(g);
    let out: Vec<Vec<NodeId>> = (0..n as NodeId)
        .map(|v| {
            let mut list: Vec<NodeId> =
                g.neighbors(v).iter().copied().filter(|&w| rank[w as usize] > rank[v as usize]).collect();
            list.sort_unstable();
            list
        })
        .collect();

    let mut cliques = Vec::new();
    let mut prefix = Vec::with_capacity(h);
    for v in 0..n as NodeId {
        prefix.push(v);
        extend_cliques(&out, h, &mut prefix, &out[v as usize], &mut cliques);
        prefix.pop();
    }
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort_unstable();

    let mut degrees = vec![0u64; n];
    let mut completions: BTreeMap<Vec<NodeId>, Vec<NodeId>> = BTreeMap::new();
    for c in &cliques {
        for (i, &v) in c.iter().enumerate() {
            degrees[v as usize] += 1;
            let mut rest = c.clone();
            rest.remove(i);
            completions.entry(rest).or_default().push(v);
        }
    }
    let lambdas = completions
        .into_iter()
        .map(|(nodes, mut completions)| {
            completions.sort_unstable();
            Lambda { nodes, completions }
        })
        .collect();
    Ok(CliqueIndex {
        h,
        cliques: cliques.into_iter().map(|nodes| MotifGroup { nodes, weight: 1 }).collect(),
        lambdas,
        degrees,
    })
}

fn extend_cliques(
    out: &[Vec<NodeId>],
    h: usize,
    prefix: &mut Vec<NodeId>,
    candidates: &[NodeId],
    found: &mut Vec<Vec<NodeId>>,
) {
    if prefix.len() == h {
        found.push(prefix.clone());
        return;
    }
    if candidates.len() + prefix.len() < h {
        return;
    }
    for &w in candidates {
        let next = intersect_sorted(candidates, &out[w as usize]);
        prefix.push(w);
        extend_cliques(out, h, prefix, &next, found);
        prefix.pop();
    }
}

fn intersect_sorted(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Position of each vertex in a smallest-last (degeneracy) ordering.
fn degeneracy_rank(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n as NodeId).map(|v| g.degree(v)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[degree[v]].push(v as NodeId);
    }
    let mut rank = vec![usize::MAX; n];
    let mut next = 0;
    let mut d = 0;
    while next < n {
        // Stale bucket entries are skipped by re-checking the live degree.
        match buckets[d].pop() {
            Some(v) if rank[v as usize] == usize::MAX && degree[v as usize] == d => {
                rank[v as usize] = next;
                next += 1;
                for &w in g.neighbors(v) {
                    let w = w as usize;
                    if rank[w] == usize::MAX {
                        degree[w] -= 1;
                        buckets[degree[w]].push(w as NodeId);
                        d = d.min(degree[w]);
                    }
                }
            }
            Some(_) => {}
            None => d += 1,
        }
    }
    rank
}

#[derive(Clone, Debug)]
pub struct InstanceIndex {
    pattern: Pattern,
    groups: Vec<MotifGroup>,
    degrees: Vec<u64>,
    total: u64,
}

impl InstanceIndex {
    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Instance groups sorted by node set.
    pub fn groups(&self) -> &[MotifGroup] {
        &self.groups
    }

    /// Pattern degree of each vertex: instances containing it.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Counts non-induced instances of `pattern` grouped by node set.
pub fn list_pattern_instances(g: &Graph, pattern: &Pattern) -> Result<InstanceIndex> {
    list_pattern_instances_capped(g, pattern, DEFAULT_PATTERN_CAP)
}

pub fn list_pattern_instances_capped(g: &Graph, pattern: &Pattern, cap: usize) -> Result<InstanceIndex> {
    if pattern.node_count() > cap {
        return Err(Error::PatternTooLarge { size: pattern.node_count(), cap });
    }
    let mut embeddings: BTreeMap<Vec<NodeId>, u64> = BTreeMap::new();
    for_each_embedding(g, pattern, |image| {
        let mut nodes = image.to_vec();
        nodes.sort_unstable();
        *embeddings.entry(nodes).or_default() += 1;
    });
    let aut = pattern.automorphism_count();
    let mut degrees = vec![0u64; g.node_count()];
    let mut total = 0;
    let mut groups = Vec::with_capacity(embeddings.len());
    for (nodes, count) in embeddings {
        if count % aut != 0 {
            return Err(Error::Internal(format!(
                "{count} embeddings on {nodes:?} not divisible by {aut} automorphisms"
            )));
        }
        let weight = count / aut;
        for &v in &nodes {
            degrees[v as usize] += weight;
        }
        total += weight;
        groups.push(MotifGroup { nodes, weight });
    }
    Ok(InstanceIndex { pattern: pattern.clone(), groups, degrees, total })
}

/// Distinct instances of `pattern` in `g`, each as its sorted edge list.
pub fn instance_edge_sets(g: &Graph, pattern: &Pattern) -> Vec<Vec<(NodeId, NodeId)>> {
    let mut seen = std::collections::BTreeSet::new();
    for_each_embedding(g, pattern, |image| {
        let mut edges: Vec<(NodeId, NodeId)> = pattern
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (image[a as usize], image[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        seen.insert(edges);
    });
    seen.into_iter().collect()
}

/// Calls `visit` with `image[i]` = graph vertex for pattern vertex `i`, for
/// every injective edge-preserving map.
fn for_each_embedding(g: &Graph, pattern: &Pattern, mut visit: impl FnMut(&[NodeId])) {
    let k = pattern.node_count();
    let pg = pattern.graph();
    let order = pivot_order(pg);
    // For each step, the earlier-placed pattern vertices adjacent to it.
    let back: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &a)| order[..i].iter().copied().filter(|&b| pg.has_edge(a as NodeId, b as NodeId)).collect())
        .collect();
    let mut image = vec![NodeId::MAX; k];
    let mut used = vec![false; g.node_count()];
    let min_degree: Vec<usize> = order.iter().map(|&a| pg.degree(a as NodeId)).collect();

    #[allow(clippy::too_many_arguments)]
    fn place(
        step: usize,
        g: &Graph,
        order: &[usize],
        back: &[Vec<usize>],
        min_degree: &[usize],
        image: &mut [NodeId],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[NodeId]),
    ) {
        if step == order.len() {
            visit(image);
            return;
        }
        let a = order[step];
        let candidates: &[NodeId] = match back[step].first() {
            Some(&b) => g.neighbors(image[b]),
            None => &[],
        };
        let try_vertex = |x: NodeId, image: &mut [NodeId], used: &mut [bool], visit: &mut dyn FnMut(&[NodeId])| {
            if used[x as usize] || g.degree(x) < min_degree[step] {
                return;
            }
            if !back[step].iter().all(|&b| g.has_edge(image[b], x)) {
                return;
            }
            image[a] = x;
            used[x as usize] = true;
            place(step + 1, g, order, back, min_degree, image, used, visit);
            used[x as usize] = false;
            image[a] = NodeId::MAX;
        };
        if back[step].is_empty() {
            for x in 0..g.node_count() as NodeId {
                try_vertex(x, image, used, visit);
            }
        } else {
            for &x in candidates {
                try_vertex(x, image, used, visit);
            }
        }
    }

    place(0, g, &order, &back, &min_degree, &mut image, &mut used, &mut visit);
}

/// Highest-degree pattern vertex first, then repeatedly the vertex with the
/// most already-ordered neighbours (ties: higher degree, lower id), so every
/// later vertex is adjacent to an earlier one.
fn pivot_order(pg: &Graph) -> Vec<usize> {
    let k = pg.node_count();
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let best = (0..k)
            .filter(|&a| !placed[a])
            .max_by_key(|&a| {
                let links = pg.neighbors(a as NodeId).iter().filter(|&&b| placed[b as usize]).count();
                (links, pg.degree(a as NodeId), std::cmp::Reverse(a))
            })
            .expect("unplaced vertex remains");
        placed[best] = true;
        order.push(best);
    }
    order
}
