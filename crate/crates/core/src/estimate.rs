//! Monte-Carlo estimators for top-k most probable densest subgraphs and
//! top-k nucleus densest subgraphs.
//!
//! Round `r` samples the world keyed by `(seed, r)`, so the rounds can run
//! on any number of workers; counts are merged by commutative addition and
//! the result does not depend on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::itemsets::{mine_topk_closed_capped, TransactionDb, DEFAULT_MINING_CAP};
use crate::nodeset::NodeSet;
use crate::notion::DensityNotion;
use crate::solver::{ExactSolver, Harvest, WorldSolver};
use crate::uncertain::{sample_world, UncertainGraph};

/// Densest sets harvested over θ rounds with their occurrence counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidatePool {
    pub counts: BTreeMap<NodeSet, u64>,
    pub rounds: u64,
    pub degenerate_rounds: u64,
}

impl CandidatePool {
    pub fn estimate(&self, set: &NodeSet) -> f64 {
        match self.counts.get(set) {
            Some(&c) if self.rounds > 0 => c as f64 / self.rounds as f64,
            _ => 0.0,
        }
    }

    /// All candidates by estimate descending, ties lexicographic.
    pub fn ranked(&self) -> Vec<(NodeSet, f64)> {
        let mut out: Vec<(NodeSet, u64)> = self.counts.iter().map(|(s, &c)| (s.clone(), c)).collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out.into_iter().map(|(s, c)| (s, c as f64 / self.rounds as f64)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateResult {
    pub ranked: Vec<(NodeSet, f64)>,
    pub notion: String,
    pub k: usize,
    pub theta: u64,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl EstimateResult {
    pub fn sets(&self) -> Vec<NodeSet> {
        self.ranked.iter().map(|(s, _)| s.clone()).collect()
    }
}

/// Per-worker accumulator; keeps the earliest failing round.
struct Partial<T> {
    acc: T,
    degenerate: u64,
    error: Option<(u64, Error)>,
}

fn merge_error(a: Option<(u64, Error)>, b: Option<(u64, Error)>) -> Option<(u64, Error)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Runs θ rounds, feeding each sampled world to `harvest` and folding the
/// outputs with `add` / `merge`.
fn run_rounds<T, H>(
    graph: &UncertainGraph,
    theta: u64,
    seed: u64,
    harvest: impl Fn(&crate::graph::Graph) -> Result<Option<H>> + Sync,
    add: impl Fn(&mut T, H) + Sync,
    merge: impl Fn(&mut T, T) + Sync + Send,
) -> Result<(T, u64)>
where
    T: Default + Send,
{
    let result = (0..theta)
        .into_par_iter()
        .fold(
            || Partial { acc: T::default(), degenerate: 0, error: None },
            |mut p, round| {
                if p.error.is_some() {
                    return p;
                }
                let world = sample_world(graph, seed, round).to_graph();
                match harvest(&world) {
                    Ok(Some(h)) => add(&mut p.acc, h),
                    Ok(None) => p.degenerate += 1,
                    Err(e) => p.error = Some((round, e)),
                }
                p
            },
        )
        .reduce(
            || Partial { acc: T::default(), degenerate: 0, error: None },
            |mut a, b| {
                merge(&mut a.acc, b.acc);
                a.degenerate += b.degenerate;
                a.error = merge_error(a.error, b.error);
                a
            },
        );
    match result.error {
        Some((round, source)) => Err(Error::Round { round, source: Box::new(source) }),
        None => Ok((result.acc, result.degenerate)),
    }
}

fn check_args(k: usize, theta: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if theta == 0 {
        return Err(Error::InvalidArgument("theta must be at least 1".into()));
    }
    Ok(())
}

/// Counts every densest subgraph of every sampled world.
pub fn sample_candidate_pool(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    solver: &dyn WorldSolver,
    theta: u64,
    seed: u64,
) -> Result<CandidatePool> {
    let (counts, degenerate_rounds) = run_rounds(
        graph,
        theta,
        seed,
        |world| {
            let Harvest { sets, degenerate } = solver.densest_sets(world, notion)?;
            Ok((!degenerate).then_some(sets))
        },
        |acc: &mut BTreeMap<NodeSet, u64>, sets| {
            for s in sets {
                *acc.entry(s).or_default() += 1;
            }
        },
        |acc, other| {
            for (s, c) in other {
                *acc.entry(s).or_default() += c;
            }
        },
    )?;
    Ok(CandidatePool { counts, rounds: theta, degenerate_rounds })
}

fn fewer_warning(found: usize, k: usize) -> Vec<String> {
    if found < k {
        vec![format!("only {found} distinct candidate sets found; fewer than k = {k}")]
    } else {
        Vec::new()
    }
}

pub fn estimate_topk_mpds(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    k: usize,
    theta: u64,
    seed: u64,
) -> Result<EstimateResult> {
    estimate_topk_mpds_with(graph, notion, &ExactSolver::default(), k, theta, seed)
}

pub fn estimate_topk_mpds_with(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    solver: &dyn WorldSolver,
    k: usize,
    theta: u64,
    seed: u64,
) -> Result<EstimateResult> {
    check_args(k, theta)?;
    log::debug!("mpds: notion {}, solver {}, theta {theta}, seed {seed}", notion.spec(), solver.name());
    let pool = sample_candidate_pool(graph, notion, solver, theta, seed)?;
    log::debug!("mpds: {} candidates, {} degenerate rounds", pool.counts.len(), pool.degenerate_rounds);
    let mut ranked = pool.ranked();
    let warnings = fewer_warning(ranked.len(), k);
    ranked.truncate(k);
    Ok(EstimateResult { ranked, notion: notion.spec(), k, theta, seed, warnings })
}

/// Collects one nucleus candidate (largest densest subgraph) per round.
pub fn sample_nucleus_db(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    solver: &dyn WorldSolver,
    theta: u64,
    seed: u64,
) -> Result<TransactionDb> {
    let (db, _) = run_rounds(
        graph,
        theta,
        seed,
        |world| solver.nucleus_set(world, notion),
        |db: &mut TransactionDb, set| db.add(set, 1),
        |db, other| db.merge(other),
    )?;
    Ok(db)
}

pub fn estimate_topk_nds(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    k: usize,
    l_m: usize,
    theta: u64,
    seed: u64,
) -> Result<EstimateResult> {
    estimate_topk_nds_with(graph, notion, &ExactSolver::default(), k, l_m, theta, seed)
}

/// γ̂(U) is the fraction of all θ rounds whose nucleus candidate contains U.
pub fn estimate_topk_nds_with(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    solver: &dyn WorldSolver,
    k: usize,
    l_m: usize,
    theta: u64,
    seed: u64,
) -> Result<EstimateResult> {
    check_args(k, theta)?;
    if l_m == 0 {
        return Err(Error::InvalidArgument("l_m must be at least 1".into()));
    }
    log::debug!("nds: notion {}, solver {}, theta {theta}, seed {seed}", notion.spec(), solver.name());
    let db = sample_nucleus_db(graph, notion, solver, theta, seed)?;
    log::debug!("nds: {} distinct nucleus candidates", db.distinct().len());
    let ranked = nds_from_db(&db, k, l_m, theta)?;
    let warnings = fewer_warning(ranked.len(), k);
    Ok(EstimateResult { ranked, notion: notion.spec(), k, theta, seed, warnings })
}

/// Top-k closed sets of a nucleus database with γ̂ = support / θ.
pub fn nds_from_db(db: &TransactionDb, k: usize, l_m: usize, theta: u64) -> Result<Vec<(NodeSet, f64)>> {
    Ok(mine_topk_closed_capped(db, k, l_m, DEFAULT_MINING_CAP)?
        .into_iter()
        .map(|(s, support)| (s, support as f64 / theta as f64))
        .collect())
}

/// Which estimator an automatic-θ run repeats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Mpds,
    Nds { l_m: usize },
}

/// θ ladder 10·2^0, …, 10·2^8.
pub fn theta_ladder() -> impl Iterator<Item = u64> {
    (0..=8).map(|i| 10u64 << i)
}

/// Jaccard similarity of two top-k lists viewed as sets of node sets.
pub fn topk_jaccard(a: &[NodeSet], b: &[NodeSet]) -> f64 {
    let a: std::collections::BTreeSet<&NodeSet> = a.iter().collect();
    let b: std::collections::BTreeSet<&NodeSet> = b.iter().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Doubles θ along the ladder until the top-k sets stop changing between
/// consecutive rungs (Jaccard = 1), or the ladder ends.
pub fn auto_theta(
    graph: &UncertainGraph,
    notion: &dyn DensityNotion,
    solver: &dyn WorldSolver,
    mode: Mode,
    k: usize,
    seed: u64,
) -> Result<EstimateResult> {
    let mut previous: Option<EstimateResult> = None;
    for theta in theta_ladder() {
        let current = match mode {
            Mode::Mpds => estimate_topk_mpds_with(graph, notion, solver, k, theta, seed)?,
            Mode::Nds { l_m } => estimate_topk_nds_with(graph, notion, solver, k, l_m, theta, seed)?,
        };
        if let Some(prev) = &previous {
            log::info!("auto-theta: theta {theta}, jaccard {}", topk_jaccard(&prev.sets(), &current.sets()));
            if topk_jaccard(&prev.sets(), &current.sets()) == 1.0 {
                return Ok(current);
            }
        }
        previous = Some(current);
    }
    let mut last = previous.expect("ladder is non-empty");
    last.warnings.push("top-k did not stabilise within the theta ladder".into());
    Ok(last)
}
