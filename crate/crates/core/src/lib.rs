//! Most probable and nucleus densest subgraphs of uncertain graphs.
//!
//! Possible worlds are sampled from an [`UncertainGraph`]; every world's
//! densest subgraphs are enumerated exactly via parametric max-flow, and the
//! per-set frequencies estimate the densest-subgraph and containment
//! probabilities. An exhaustive oracle gives ground truth at small scale.

pub mod bounds;
pub mod densest;
pub mod error;
pub mod estimate;
pub mod flow;
pub mod graph;
pub mod itemsets;
pub mod metrics;
pub mod motifs;
pub mod nodeset;
pub mod notion;
pub mod oracle;
pub mod pattern;
pub mod rational;
pub mod solver;
pub mod synthetic;
pub mod uncertain;

pub use error::{Error, Result};
pub use graph::Graph;
pub use nodeset::{NodeId, NodeSet};
pub use notion::{DensityNotion, MotifIndex, NotionRegistry};
pub use pattern::Pattern;
pub use rational::Density;
pub use uncertain::{UncertainGraph, World};
