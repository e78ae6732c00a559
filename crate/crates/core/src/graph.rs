use crate::error::{Error, Result};
use crate::nodeset::{NodeId, NodeSet};

/// Simple undirected deterministic graph over dense ids `0..n`.
///
/// Possible worlds, pruned cores and pattern templates are all materialized
/// into this form before any motif counting or flow construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoints are normalized to `u < v`
    /// and duplicates collapse; self-loops and out-of-range ids are errors.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on node {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for {n} nodes"
                )));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_edges(n, list))
    }

    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj, edges }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Subgraph induced by `nodes`, relabelled to `0..nodes.len()` in the
    /// order given. The returned vector maps new ids back to ids of `self`.
    pub fn induced(&self, nodes: &[NodeId]) -> (Graph, Vec<NodeId>) {
        let mut local = vec![NodeId::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v as usize] = i as NodeId;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            let (a, b) = (local[u as usize], local[v as usize]);
            if a != NodeId::MAX && b != NodeId::MAX {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        (Graph::from_sorted_edges(nodes.len(), edges), nodes.to_vec())
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edge_count(&self, set: &NodeSet) -> usize {
        set.iter()
            .map(|v| self.neighbors(v).iter().filter(|&&w| w > v && set.contains(w)).count())
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0 as NodeId];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}
