//! Uncertain graphs, possible worlds and the seeded world sampler.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeId;

/// Lower clamp for probabilities produced by [`ProbabilityModel`]s.
pub const DEFAULT_PROBABILITY_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertainEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub p: f64,
}

/// Undirected graph whose edges exist independently with probability `p`.
///
/// Node ids are dense in `0..n`. The external label of each node (the
/// integer used in the input file) is kept so results can be reported in the
/// caller's id space.
#[derive(Clone, Debug)]
pub struct UncertainGraph {
    labels: Vec<u64>,
    edges: Vec<UncertainEdge>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
}

impl UncertainGraph {
    /// Builds a graph over dense ids `0..n`; labels equal ids.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId, f64)>) -> Result<Self> {
        Self::with_labels((0..n as u64).collect(), edges)
    }

    fn with_labels(
        labels: Vec<u64>,
        edges: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut list = Vec::new();
        let mut seen = BTreeSet::new();
        for (a, b, p) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on node {}", labels[a as usize])));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidGraph(format!("probability {p} outside (0,1]")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({},{})",
                    labels[u as usize], labels[v as usize]
                )));
            }
            list.push(UncertainEdge { u, v, p });
        }
        list.sort_by_key(|e| (e.u, e.v));
        let mut adjacency = vec![Vec::new(); n];
        for e in &list {
            adjacency[e.u as usize].push((e.v, e.p));
            adjacency[e.v as usize].push((e.u, e.p));
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(w, _)| w);
        }
        Ok(UncertainGraph { labels, edges: list, adjacency })
    }

    /// Builds a graph from arbitrary integer node labels. Labels are mapped
    /// to dense ids in ascending label order.
    pub fn from_labeled_edges(edges: &[(u64, u64, f64)]) -> Result<Self> {
        let labels: Vec<u64> = edges
            .iter()
            .flat_map(|&(a, b, _)| [a, b])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: BTreeMap<u64, NodeId> =
            labels.iter().enumerate().map(|(i, &l)| (l, i as NodeId)).collect();
        Self::with_labels(labels, edges.iter().map(|&(a, b, p)| (index[&a], index[&b], p)))
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)` with `u < v`; the position is the edge index
    /// used by [`World`] bitsets.
    pub fn edges(&self) -> &[UncertainEdge] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[v as usize]
    }

    pub fn probability(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let row = &self.adjacency[u as usize];
        row.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| row[i].1)
    }

    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search_by_key(&key, |e| (e.u, e.v)).ok()
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn node_of_label(&self, label: u64) -> Option<NodeId> {
        self.labels.binary_search(&label).ok().map(|i| i as NodeId)
    }

    /// Deterministic graph containing every edge regardless of probability.
    pub fn skeleton(&self) -> Graph {
        Graph::from_sorted_edges(self.node_count(), self.edges.iter().map(|e| (e.u, e.v)).collect())
    }
}

pub fn parse_uncertain_graph(text: &str) -> Result<UncertainGraph> {
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected `u v p`, found {} fields", fields.len()),
            });
        }
        let parse_id = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad node id `{s}`"),
            })
        };
        let (u, v) = (parse_id(fields[0])?, parse_id(fields[1])?);
        let p: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad probability `{}`", fields[2]),
        })?;
        if u == v {
            return Err(Error::Parse { line: line_no, msg: format!("self-loop on node {u}") });
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Parse { line: line_no, msg: format!("probability {p} outside (0,1]") });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Parse { line: line_no, msg: format!("duplicate edge ({u},{v})") });
        }
        edges.push((u, v, p));
    }
    UncertainGraph::from_labeled_edges(&edges)
}

pub fn load_uncertain_graph(path: impl AsRef<Path>) -> Result<UncertainGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_uncertain_graph(&text)
}

/// Edge-probability models for graphs given as interaction counts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbabilityModel {
    /// `p = 1 - exp(-t / mean)` for an edge with `t` interactions.
    ExponentialCdf { mean: f64 },
    /// `p = 1 / max(deg(u), deg(v))`.
    ReciprocalDegree,
}

/// Assigns probabilities to a weighted edge list `(u, v, t)`. Results that
/// fall below `floor` (e.g. `t = 0`) are clamped to it.
pub fn assign_probabilities(
    edges: &[(u64, u64, f64)],
    model: ProbabilityModel,
    floor: f64,
) -> Result<UncertainGraph> {
    if !(floor > 0.0 && floor <= 1.0) {
        return Err(Error::InvalidArgument(format!("probability floor {floor} outside (0,1]")));
    }
    let probs: Vec<f64> = match model {
        ProbabilityModel::ExponentialCdf { mean } => {
            if mean.is_nan() || mean <= 0.0 {
                return Err(Error::InvalidArgument(format!("mean must be positive, got {mean}")));
            }
            edges
                .iter()
                .map(|&(_, _, t)| {
                    if t < 0.0 {
                        Err(Error::InvalidArgument(format!("negative interaction count {t}")))
                    } else {
                        Ok(1.0 - (-t / mean).exp())
                    }
                })
                .collect::<Result<_>>()?
        }
        ProbabilityModel::ReciprocalDegree => {
            let mut degree: BTreeMap<u64, usize> = BTreeMap::new();
            for &(u, v, _) in edges {
                *degree.entry(u).or_default() += 1;
                *degree.entry(v).or_default() += 1;
            }
            edges
                .iter()
                .map(|&(u, v, _)| Ok(1.0 / degree[&u].max(degree[&v]) as f64))
                .collect::<Result<_>>()?
        }
    };
    let list: Vec<(u64, u64, f64)> = edges
        .iter()
        .zip(probs)
        .map(|(&(u, v, _), p)| (u, v, p.max(floor).min(1.0)))
        .collect();
    UncertainGraph::from_labeled_edges(&list)
}

/// One possible world: the subset of present edges and its log-probability.
#[derive(Clone, Debug)]
pub struct World<'g> {
    parent: &'g UncertainGraph,
    present: FixedBitSet,
    log_prob: f64,
}

impl<'g> World<'g> {
    pub fn from_present(parent: &'g UncertainGraph, present: FixedBitSet) -> Self {
        assert_eq!(present.len(), parent.edge_count());
        let log_prob = parent
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| if present.contains(i) { e.p.ln() } else { (1.0 - e.p).ln() })
            .sum();
        World { parent, present, log_prob }
    }

    /// World selecting edges by the low bits of `mask` (edge `i` ↔ bit `i`).
    pub fn from_mask(parent: &'g UncertainGraph, mask: u64) -> Self {
        let mut present = FixedBitSet::with_capacity(parent.edge_count());
        for i in 0..parent.edge_count() {
            present.set(i, mask >> i & 1 == 1);
        }
        Self::from_present(parent, present)
    }

    pub fn parent(&self) -> &'g UncertainGraph {
        self.parent
    }

    pub fn present(&self) -> &FixedBitSet {
        &self.present
    }

    pub fn log_prob(&self) -> f64 {
        self.log_prob
    }

    pub fn probability(&self) -> f64 {
        self.log_prob.exp()
    }

    /// Materializes the world as a deterministic graph on all parent nodes.
    pub fn to_graph(&self) -> Graph {
        let edges = self
            .present
            .ones()
            .map(|i| {
                let e = self.parent.edges()[i];
                (e.u, e.v)
            })
            .collect();
        Graph::from_sorted_edges(self.parent.node_count(), edges)
    }
}

/// Samples world number `round` of the stream identified by `seed`.
///
/// Each round reads its own ChaCha stream, so the result depends only on
/// `(seed, round)` and not on which worker draws it or in what order.
pub fn sample_world(graph: &UncertainGraph, seed: u64, round: u64) -> World<'_> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round);
    let m = graph.edge_count();
    let mut present = FixedBitSet::with_capacity(m);
    let mut log_prob = 0.0;
    for (i, e) in graph.edges().iter().enumerate() {
        let draw: f64 = rng.gen();
        if draw < e.p {
            present.insert(i);
            log_prob += e.p.ln();
        } else {
            log_prob += (1.0 - e.p).ln();
        }
    }
    World { parent: graph, present, log_prob }
}
