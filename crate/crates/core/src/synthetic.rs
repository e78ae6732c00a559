//! Seeded random uncertain graphs for benchmarks: Erdős–Rényi and
//! Barabási–Albert skeletons with uniform edge probabilities.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nodeset::NodeId;
use crate::uncertain::UncertainGraph;

/// Edge probabilities are drawn uniformly from `[min_probability, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityRange {
    pub min_probability: f64,
}

impl Default for ProbabilityRange {
    fn default() -> Self {
        ProbabilityRange { min_probability: 0.1 }
    }
}

fn attach_probabilities(
    n: usize,
    edges: BTreeSet<(NodeId, NodeId)>,
    range: ProbabilityRange,
    rng: &mut ChaCha8Rng,
) -> Result<UncertainGraph> {
    let lo = range.min_probability;
    if !(lo > 0.0 && lo <= 1.0) {
        return Err(Error::InvalidArgument(format!("minimum probability {lo} outside (0,1]")));
    }
    let edges: Vec<(NodeId, NodeId, f64)> =
        edges.into_iter().map(|(u, v)| (u, v, if lo == 1.0 { 1.0 } else { rng.gen_range(lo..=1.0) })).collect();
    UncertainGraph::new(n, edges)
}

/// G(n, p): every pair independently with probability `edge_density`.
pub fn erdos_renyi(n: usize, edge_density: f64, range: ProbabilityRange, seed: u64) -> Result<UncertainGraph> {
    if !(0.0..=1.0).contains(&edge_density) {
        return Err(Error::InvalidArgument(format!("edge density {edge_density} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(edge_density) {
                edges.insert((u, v));
            }
        }
    }
    attach_probabilities(n, edges, range, &mut rng)
}

/// Preferential attachment: each new node links to `attach` distinct
/// earlier nodes chosen proportionally to degree, starting from a clique
/// on `attach + 1` nodes.
pub fn barabasi_albert(n: usize, attach: usize, range: ProbabilityRange, seed: u64) -> Result<UncertainGraph> {
    if attach == 0 || n <= attach {
        return Err(Error::InvalidArgument(format!("need 0 < attach < n, got attach {attach}, n {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    // Every edge endpoint once: sampling from it is degree-proportional.
    let mut endpoints: Vec<NodeId> = Vec::new();
    for u in 0..=attach as NodeId {
        for v in u + 1..=attach as NodeId {
            edges.insert((u, v));
            endpoints.extend([u, v]);
        }
    }
    for new in attach as NodeId + 1..n as NodeId {
        let mut targets = BTreeSet::new();
        while targets.len() < attach {
            targets.insert(*endpoints.choose(&mut rng).expect("seed clique has edges"));
        }
        for t in targets {
            edges.insert((t, new));
            endpoints.extend([t, new]);
        }
    }
    attach_probabilities(n, edges, range, &mut rng)
}
