//! Accuracy guarantees for the sampling estimators as functions of θ.

use crate::error::Result;
use crate::nodeset::NodeSet;
use crate::notion::DensityNotion;
use crate::oracle::{topk_closed, world_table};
use crate::uncertain::UncertainGraph;

/// Probability that every one of the true top-k sets appears among the
/// candidates after θ rounds: `1 − Σ (1 − τ_i)^θ`, floored at 0.
pub fn mpds_inclusion_bound(true_taus: &[f64], theta: u64) -> f64 {
    let miss: f64 = true_taus.iter().map(|&t| (1.0 - t).powf(theta as f64)).sum();
    (1.0 - miss).max(0.0)
}

/// Hoeffding factor `1 − Σ exp(−2 d_U² θ)` with d_U measured from the
/// midpoint between the k-th and (k+1)-th true values. A set on the wrong
/// side of the midpoint (d_U ≤ 0) contributes its worst case, 1.
fn separation_factor(top: &[f64], next: f64, others: &[f64], theta: u64) -> f64 {
    let Some(&kth) = top.last() else { return 0.0 };
    let mid = 0.5 * (kth + next);
    let term = |d: f64| if d > 0.0 { (-2.0 * d * d * theta as f64).exp() } else { 1.0 };
    let sum: f64 = top.iter().map(|&t| term(t - mid)).sum::<f64>() + others.iter().map(|&t| term(mid - t)).sum::<f64>();
    1.0 - sum
}

/// Probability that exactly the true top-k sets are returned.
///
/// `true_taus` holds τ(V_1) ≥ … ≥ τ(V_{k+1}); `other_taus` the true values
/// of the remaining candidates (all candidates except V_1..V_k).
pub fn mpds_return_bound(true_taus: &[f64], other_taus: &[f64], theta: u64) -> f64 {
    if true_taus.len() < 2 {
        return 0.0;
    }
    let (top, next) = true_taus.split_at(true_taus.len() - 1);
    let inclusion = mpds_inclusion_bound(top, theta);
    (inclusion * separation_factor(top, next[0], other_taus, theta)).max(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NdsBounds {
    /// Probability that the true top-k sets are closed w.r.t. γ̂.
    pub closure_bound: f64,
    /// Probability that exactly the true top-k sets are returned.
    pub return_bound: f64,
    /// The true top-k closed sets with their γ.
    pub true_topk: Vec<(NodeSet, f64)>,
}

/// Both NDS guarantees, from exhaustive world enumeration. The candidate
/// list is every closed set of size ≥ `l_m`; a missing (k+1)-th set counts
/// as γ = 0.
pub fn nds_bounds(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    k: usize,
    l_m: usize,
    theta: u64,
) -> Result<NdsBounds> {
    let table = world_table(graph, notion)?;
    let ranked = topk_closed(&table, usize::MAX, l_m);
    let true_topk: Vec<(NodeSet, f64)> = ranked.iter().take(k).cloned().collect();

    // Worlds whose largest densest subgraph contains some V_i, each once.
    let world_probs: Vec<f64> = table
        .worlds()
        .filter(|(_, maximal)| true_topk.iter().any(|(v, _)| v.is_subset(maximal)))
        .map(|(p, _)| p)
        .collect();
    let miss: f64 = world_probs.iter().map(|&p| (1.0 - p).powf(theta as f64)).sum();
    let closure_bound = if true_topk.is_empty() { 0.0 } else { (1.0 - miss).max(0.0) };

    let top: Vec<f64> = true_topk.iter().map(|(_, g)| *g).collect();
    let next = ranked.get(k).map_or(0.0, |(_, g)| *g);
    let others: Vec<f64> = ranked.iter().skip(k).map(|(_, g)| *g).collect();
    let return_bound = (closure_bound * separation_factor(&top, next, &others, theta)).max(0.0);
    Ok(NdsBounds { closure_bound, return_bound, true_topk })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notion::NotionRegistry;

    #[test]
    fn inclusion_examples() {
        assert!((mpds_inclusion_bound(&[0.42], 10) - (1.0 - 0.58f64.powi(10))).abs() < 1e-12);
        assert!((mpds_inclusion_bound(&[0.42], 10) - 0.99570).abs() < 1e-5);
        assert_eq!(mpds_inclusion_bound(&[1.0], 1), 1.0);
        assert_eq!(mpds_inclusion_bound(&[0.5, 0.5], 1), 0.0);
    }

    #[test]
    fn return_bound_examples() {
        let b = mpds_return_bound(&[0.42, 0.28], &[0.28], 10_000);
        let expect = (1.0 - 0.58f64.powi(10_000)) * (1.0 - 2.0 * (-2.0 * 0.07f64.powi(2) * 1e4).exp());
        assert!((b - expect).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-6);
        assert_eq!(mpds_return_bound(&[0.3, 0.3], &[0.3], 100), 0.0);
        let mut last = 0.0;
        for theta in [10, 100, 1000, 10_000] {
            let b = mpds_return_bound(&[0.42, 0.28], &[0.28, 0.24], theta);
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn nds_bounds_four_path() {
        let g = UncertainGraph::new(4, [(0, 1, 0.4), (0, 2, 0.4), (1, 3, 0.7)]).unwrap();
        let edge = NotionRegistry::default().parse("edge").unwrap();
        let b = nds_bounds(&g, &*edge, 1, 2, 100).unwrap();
        assert_eq!(b.true_topk[0].0, NodeSet::from([1, 3]));
        // The four worlds containing edge 1-3 have {1,3} in a densest subgraph.
        let expect = 1.0 - [0.252, 0.168, 0.168, 0.112].iter().map(|p: &f64| (1.0 - p).powi(100)).sum::<f64>();
        assert!((b.closure_bound - expect).abs() < 1e-9);
        assert!(b.return_bound <= b.closure_bound);

        let zero = nds_bounds(&g, &*edge, 1, 2, 0).unwrap();
        assert_eq!((zero.closure_bound, zero.return_bound), (0.0, 0.0));

        let certain = UncertainGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(nds_bounds(&certain, &*edge, 1, 2, 1).unwrap().closure_bound, 1.0);
    }
}
