//! Exact integer max-flow, the parametric density networks, and residual
//! strongly-connected-component analysis.

mod builders;
mod dinic;
mod network;
mod scc;

pub use builders::{build_clique_flow_network, build_edge_flow_network, build_pattern_flow_network, full_saturation};
pub use dinic::{max_flow, MaxFlow};
pub use network::{vertex_node, Arc, Capacity, FlowNetwork, NetworkBuilder, SINK, SOURCE};
pub use scc::{residual_scc_dag, ComponentDag};
