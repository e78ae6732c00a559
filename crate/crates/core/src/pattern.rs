use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeId;

/// Patterns available by name on the command line.
pub const BUILTIN_PATTERNS: &[&str] =
    &["edge", "triangle", "2-star", "3-star", "c3-star", "diamond", "4-clique"];

/// Small connected template graph with its automorphism count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    name: String,
    graph: Graph,
    automorphisms: u64,
}

impl Pattern {
    pub fn new(name: impl Into<String>, node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::InvalidPattern("a pattern needs at least two nodes".into()));
        }
        if node_count > 10 {
            return Err(Error::InvalidPattern(format!("{node_count} nodes is too many for a pattern")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidPattern(format!("self-loop on pattern node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidPattern(format!("duplicate pattern edge ({a},{b})")));
            }
        }
        let graph = Graph::new(node_count, edges.iter().copied())
            .map_err(|e| Error::InvalidPattern(e.to_string()))?;
        if !graph.is_connected() {
            return Err(Error::InvalidPattern("pattern must be connected".into()));
        }
        let automorphisms = count_automorphisms(&graph);
        Ok(Pattern { name: name.into(), graph, automorphisms })
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let (n, edges): (usize, &[(NodeId, NodeId)]) = match name {
            "edge" => (2, &[(0, 1)]),
            "triangle" => (3, &[(0, 1), (0, 2), (1, 2)]),
            "2-star" => (3, &[(0, 1), (0, 2)]),
            "3-star" => (4, &[(0, 1), (0, 2), (0, 3)]),
            // 3-star with one leaf-leaf edge (the "paw").
            "c3-star" => (4, &[(0, 1), (0, 2), (0, 3), (1, 2)]),
            "diamond" => (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
            "4-clique" => (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            _ => return None,
        };
        Some(Pattern::new(name, n, edges).expect("builtin patterns are valid"))
    }

    pub fn clique(h: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..h as NodeId {
            for b in a + 1..h as NodeId {
                edges.push((a, b));
            }
        }
        Pattern::new(format!("{h}-clique"), h, &edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        self.graph.edges()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn automorphism_count(&self) -> u64 {
        self.automorphisms
    }
}

fn count_automorphisms(g: &Graph) -> u64 {
    let n = g.node_count();
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    let mut count = 0;
    // Heap's algorithm over all n! relabellings.
    let mut c = vec![0usize; n];
    let preserves = |p: &[NodeId]| g.edges().iter().all(|&(a, b)| g.has_edge(p[a as usize], p[b as usize]));
    if preserves(&perm) {
        count += 1;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if preserves(&perm) {
                count += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

/// Parses a pattern file: lines `a b` over nodes `0..k`, `#` comments.
pub fn parse_pattern(name: &str, text: &str) -> Result<Pattern> {
    let mut edges = Vec::new();
    let mut max_id = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: i + 1, msg: "expected `a b`".into() });
        }
        let mut ids = [0 as NodeId; 2];
        for (slot, f) in ids.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad pattern node `{f}`"),
            })?;
        }
        max_id = max_id.max(ids[0]).max(ids[1]);
        edges.push((ids[0], ids[1]));
    }
    if edges.is_empty() {
        return Err(Error::InvalidPattern("pattern file has no edges".into()));
    }
    Pattern::new(name, max_id as usize + 1, &edges)
}

pub fn load_pattern(path: impl AsRef<Path>) -> Result<Pattern> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("pattern");
    parse_pattern(name, &text)
}
