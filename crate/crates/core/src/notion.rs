//! Density notions as pluggable strategies.
//!
//! A [`DensityNotion`] turns a deterministic graph into a [`MotifIndex`]:
//! the motif groups, per-vertex motif degrees and the parametric flow
//! network for that notion. Everything downstream (peeling, pruning, exact
//! search, enumeration) works through these two traits only.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flow::{build_clique_flow_network, build_edge_flow_network, build_pattern_flow_network, FlowNetwork};
use crate::graph::Graph;
use crate::motifs::{list_h_cliques, list_pattern_instances, CliqueIndex, InstanceIndex, MotifGroup};
use crate::nodeset::NodeSet;
use crate::pattern::{load_pattern, Pattern};
use crate::rational::{density, Density};

/// Motif structure of one deterministic graph under one notion.
pub trait MotifIndex: Send + Sync + Debug {
    /// Nodes per motif: 2 for edges, h for cliques, |V_ψ| for patterns.
    fn order(&self) -> usize;
    /// Total motif count μ.
    fn total(&self) -> u64;
    fn degrees(&self) -> &[u64];
    /// Motifs grouped by node set; each motif lies inside its group's nodes.
    fn groups(&self) -> &[MotifGroup];
    /// Network whose min cut falls below `order · total · scale` exactly
    /// when some vertex set is denser than `alpha`.
    fn flow_network(&self, alpha: Density) -> Result<FlowNetwork>;
}

pub trait DensityNotion: Send + Sync + Debug {
    /// Canonical specifier, e.g. `edge`, `clique:3`, `pattern:diamond`.
    fn spec(&self) -> String;
    fn order(&self) -> usize;
    /// The motif as a template graph (an edge, a clique, or ψ).
    fn template(&self) -> &Pattern;
    fn index(&self, g: &Graph) -> Result<Box<dyn MotifIndex>>;
}

#[derive(Debug)]
pub struct EdgeNotion {
    template: Pattern,
}

impl EdgeNotion {
    pub fn new() -> Self {
        EdgeNotion { template: Pattern::builtin("edge").expect("edge pattern") }
    }
}

impl Default for EdgeNotion {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug)]
struct EdgeIndex {
    graph: Graph,
    groups: Vec<MotifGroup>,
    degrees: Vec<u64>,
}

impl MotifIndex for EdgeIndex {
    fn order(&self) -> usize {
        2
    }
    fn total(&self) -> u64 {
        self.groups.len() as u64
    }
    fn degrees(&self) -> &[u64] {
        &self.degrees
    }
    fn groups(&self) -> &[MotifGroup] {
        &self.groups
    }
    fn flow_network(&self, alpha: Density) -> Result<FlowNetwork> {
        build_edge_flow_network(&self.graph, alpha)
    }
}

impl DensityNotion for EdgeNotion {
    fn spec(&self) -> String {
        "edge".into()
    }
    fn order(&self) -> usize {
        2
    }
    fn template(&self) -> &Pattern {
        &self.template
    }
    fn index(&self, g: &Graph) -> Result<Box<dyn MotifIndex>> {
        let groups = g.edges().iter().map(|&(u, v)| MotifGroup { nodes: vec![u, v], weight: 1 }).collect();
        let degrees = (0..g.node_count() as u32).map(|v| g.degree(v) as u64).collect();
        Ok(Box::new(EdgeIndex { graph: g.clone(), groups, degrees }))
    }
}

#[derive(Debug)]
pub struct CliqueNotion {
    h: usize,
    template: Pattern,
}

impl CliqueNotion {
    pub fn new(h: usize) -> Result<Self> {
        if h < 2 {
            return Err(Error::InvalidArgument(format!("clique size must be at least 2, got {h}")));
        }
        Ok(CliqueNotion { h, template: Pattern::clique(h)? })
    }
}

#[derive(Debug)]
struct CliqueMotifs {
    n: usize,
    index: CliqueIndex,
}

impl MotifIndex for CliqueMotifs {
    fn order(&self) -> usize {
        self.index.h()
    }
    fn total(&self) -> u64 {
        self.index.count()
    }
    fn degrees(&self) -> &[u64] {
        self.index.degrees()
    }
    fn groups(&self) -> &[MotifGroup] {
        self.index.cliques()
    }
    fn flow_network(&self, alpha: Density) -> Result<FlowNetwork> {
        build_clique_flow_network(self.n, &self.index, alpha)
    }
}

impl DensityNotion for CliqueNotion {
    fn spec(&self) -> String {
        format!("clique:{}", self.h)
    }
    fn order(&self) -> usize {
        self.h
    }
    fn template(&self) -> &Pattern {
        &self.template
    }
    fn index(&self, g: &Graph) -> Result<Box<dyn MotifIndex>> {
        Ok(Box::new(CliqueMotifs { n: g.node_count(), index: list_h_cliques(g, self.h)? }))
    }
}

#[derive(Debug)]
pub struct PatternNotion {
    pattern: Pattern,
}

impl PatternNotion {
    pub fn new(pattern: Pattern) -> Self {
        PatternNotion { pattern }
    }
}

#[derive(Debug)]
struct PatternMotifs {
    n: usize,
    index: InstanceIndex,
}

impl MotifIndex for PatternMotifs {
    fn order(&self) -> usize {
        self.index.pattern().node_count()
    }
    fn total(&self) -> u64 {
        self.index.total()
    }
    fn degrees(&self) -> &[u64] {
        self.index.degrees()
    }
    fn groups(&self) -> &[MotifGroup] {
        self.index.groups()
    }
    fn flow_network(&self, alpha: Density) -> Result<FlowNetwork> {
        build_pattern_flow_network(self.n, self.order(), self.index.groups(), alpha)
    }
}

impl DensityNotion for PatternNotion {
    fn spec(&self) -> String {
        format!("pattern:{}", self.pattern.name())
    }
    fn order(&self) -> usize {
        self.pattern.node_count()
    }
    fn template(&self) -> &Pattern {
        &self.pattern
    }
    fn index(&self, g: &Graph) -> Result<Box<dyn MotifIndex>> {
        Ok(Box::new(PatternMotifs { n: g.node_count(), index: list_pattern_instances(g, &self.pattern)? }))
    }
}

/// Builds a notion from the argument after `name:` (if any).
pub type NotionFactory = fn(Option<&str>) -> Result<Arc<dyn DensityNotion>>;

/// Name → factory table behind the `--density` specifier grammar.
#[derive(Debug, Clone)]
pub struct NotionRegistry {
    factories: BTreeMap<String, NotionFactory>,
}

impl Default for NotionRegistry {
    fn default() -> Self {
        let mut registry = NotionRegistry { factories: BTreeMap::new() };
        registry.register("edge", |arg| match arg {
            None => Ok(Arc::new(EdgeNotion::new())),
            Some(a) => Err(Error::UnknownNotion(format!("edge:{a}"))),
        });
        registry.register("clique", |arg| {
            let h = arg
                .and_then(|a| a.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownNotion(format!("clique:{}", arg.unwrap_or(""))))?;
            Ok(Arc::new(CliqueNotion::new(h)?))
        });
        registry.register("pattern", |arg| {
            let arg = arg.ok_or_else(|| Error::UnknownNotion("pattern".into()))?;
            let pattern = match Pattern::builtin(arg) {
                Some(p) if !Path::new(arg).exists() => p,
                _ => load_pattern(arg)?,
            };
            Ok(Arc::new(PatternNotion::new(pattern)))
        });
        registry
    }
}

impl NotionRegistry {
    pub fn register(&mut self, name: &str, factory: NotionFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    /// Parses `edge`, `clique:<h>` or `pattern:<builtin-or-file>`.
    pub fn parse(&self, spec: &str) -> Result<Arc<dyn DensityNotion>> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownNotion(spec.to_string()))?;
        factory(arg)
    }
}

/// Motif count of `g[set]` divided by `|set|`.
pub fn induced_density(g: &Graph, set: &NodeSet, notion: &dyn DensityNotion) -> Result<Density> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(v) = set.iter().find(|&v| v as usize >= g.node_count()) {
        return Err(Error::InvalidArgument(format!("node {v} not in graph")));
    }
    let (sub, _) = g.induced(set.as_slice());
    Ok(density(notion.index(&sub)?.total(), set.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_world(edges: &[(u32, u32)]) -> Graph {
        Graph::new(4, edges.iter().copied()).unwrap()
    }

    #[test]
    fn densities_on_path_worlds() {
        let reg = NotionRegistry::default();
        let edge = reg.parse("edge").unwrap();
        let full = path_world(&[(0, 1), (0, 2), (1, 3)]);
        assert_eq!(induced_density(&full, &NodeSet::from([0, 1, 2, 3]), &*edge).unwrap(), Density::new(3, 4));
        let one_edge = path_world(&[(0, 1)]);
        assert_eq!(induced_density(&one_edge, &NodeSet::from([0, 1]), &*edge).unwrap(), Density::new(1, 2));
        assert!(matches!(induced_density(&one_edge, &NodeSet::default(), &*edge), Err(Error::EmptySet)));
    }

    #[test]
    fn triangle_clique_density() {
        let reg = NotionRegistry::default();
        let tri = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let c3 = reg.parse("clique:3").unwrap();
        assert_eq!(induced_density(&tri, &NodeSet::from([0, 1, 2]), &*c3).unwrap(), Density::new(1, 3));
    }

    #[test]
    fn parses_specifiers() {
        let reg = NotionRegistry::default();
        assert_eq!(reg.parse("clique:4").unwrap().spec(), "clique:4");
        assert_eq!(reg.parse("pattern:diamond").unwrap().order(), 4);
        assert!(matches!(reg.parse("clique:x"), Err(Error::UnknownNotion(_))));
        assert!(matches!(reg.parse("clique:1"), Err(Error::InvalidArgument(_))));
        assert!(matches!(reg.parse("truss"), Err(Error::UnknownNotion(_))));
        assert!(reg.parse("pattern:/no/such/file.txt").is_err());
        let names: Vec<_> = reg.names().collect();
        assert_eq!(names, vec!["clique", "edge", "pattern"]);
    }

    #[test]
    fn two_clique_and_edge_pattern_equal_edge_density() {
        let reg = NotionRegistry::default();
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        let edge = reg.parse("edge").unwrap();
        let c2 = reg.parse("clique:2").unwrap();
        let pe = reg.parse("pattern:edge").unwrap();
        for mask in 1u64..32 {
            let s = NodeSet::from_mask(mask);
            let d = induced_density(&g, &s, &*edge).unwrap();
            assert_eq!(induced_density(&g, &s, &*c2).unwrap(), d);
            assert_eq!(induced_density(&g, &s, &*pe).unwrap(), d);
        }
    }
}
