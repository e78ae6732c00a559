//! Per-world solvers: how a sampled world is turned into candidate sets.
//! The exact solver enumerates every densest subgraph; the heuristic one
//! reads dense subgraphs off the motif core decomposition.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use crate::densest::{enumerate_all_densest_capped, heuristic_pattern_dense, maximal_densest, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::notion::DensityNotion;

/// Candidate sets harvested from one world.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Harvest {
    pub sets: Vec<NodeSet>,
    /// The world has no motif; it contributes nothing.
    pub degenerate: bool,
}

pub trait WorldSolver: Send + Sync + Debug {
    fn name(&self) -> &'static str;
    /// Every densest subgraph of the world (MPDS harvest).
    fn densest_sets(&self, world: &Graph, notion: &dyn DensityNotion) -> Result<Harvest>;
    /// The single largest densest subgraph (NDS harvest); `None` for a
    /// degenerate world.
    fn nucleus_set(&self, world: &Graph, notion: &dyn DensityNotion) -> Result<Option<NodeSet>>;
}

#[derive(Clone, Debug)]
pub struct ExactSolver {
    pub enumeration_cap: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver { enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }
}

impl WorldSolver for ExactSolver {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn densest_sets(&self, world: &Graph, notion: &dyn DensityNotion) -> Result<Harvest> {
        let r = enumerate_all_densest_capped(world, notion, self.enumeration_cap)?;
        if r.degenerate {
            return Ok(Harvest { sets: Vec::new(), degenerate: true });
        }
        Ok(Harvest { sets: r.all_densest, degenerate: false })
    }

    fn nucleus_set(&self, world: &Graph, notion: &dyn DensityNotion) -> Result<Option<NodeSet>> {
        let r = maximal_densest(world, notion)?;
        Ok((!r.degenerate).then_some(r.maximal))
    }
}

/// Innermost motif core plus denser peeling suffixes; the core alone is the
/// nucleus candidate.
#[derive(Clone, Debug, Default)]
pub struct HeuristicSolver;

impl WorldSolver for HeuristicSolver {
    fn name(&self) -> &'static str {
        "heuristic"
    }

    fn densest_sets(&self, world: &Graph, notion: &dyn DensityNotion) -> Result<Harvest> {
        let sets = heuristic_pattern_dense(world, notion)?;
        let degenerate = sets.is_empty();
        Ok(Harvest { sets, degenerate })
    }

    fn nucleus_set(&self, world: &Graph, notion: &dyn DensityNotion) -> Result<Option<NodeSet>> {
        Ok(heuristic_pattern_dense(world, notion)?.into_iter().next())
    }
}

#[derive(Debug, Clone)]
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Arc<dyn WorldSolver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut registry = SolverRegistry { solvers: BTreeMap::new() };
        registry.register(Arc::new(ExactSolver::default()));
        registry.register(Arc::new(HeuristicSolver));
        registry
    }
}

impl SolverRegistry {
    pub fn register(&mut self, solver: Arc<dyn WorldSolver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn WorldSolver>> {
        self.solvers.get(name).cloned().ok_or_else(|| Error::UnknownSolver(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notion::NotionRegistry;

    #[test]
    fn registry_lookup() {
        let reg = SolverRegistry::default();
        assert_eq!(reg.get("exact").unwrap().name(), "exact");
        assert_eq!(reg.get("heuristic").unwrap().name(), "heuristic");
        assert!(matches!(reg.get("lazy"), Err(Error::UnknownSolver(_))));
    }

    #[test]
    fn degenerate_world_harvests_nothing() {
        let edge = NotionRegistry::default().parse("edge").unwrap();
        let empty = Graph::empty(4);
        for solver in [&ExactSolver::default() as &dyn WorldSolver, &HeuristicSolver] {
            let h = solver.densest_sets(&empty, &*edge).unwrap();
            assert!(h.degenerate && h.sets.is_empty());
            assert_eq!(solver.nucleus_set(&empty, &*edge).unwrap(), None);
        }
    }

    #[test]
    fn two_edge_harvest() {
        let edge = NotionRegistry::default().parse("edge").unwrap();
        let two_edges = Graph::new(4, [(0, 2), (1, 3)]).unwrap();
        let h = ExactSolver::default().densest_sets(&two_edges, &*edge).unwrap();
        assert_eq!(h.sets.len(), 3);
        assert_eq!(ExactSolver::default().nucleus_set(&two_edges, &*edge).unwrap(), Some(NodeSet::from([0, 1, 2, 3])));
    }
}
