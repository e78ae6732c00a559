use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

/// Index of graph vertex `v` inside a flow network.
pub fn vertex_node(v: usize) -> usize {
    v + 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
}

/// Directed network with integer capacities. Arc `2i` is a forward arc and
/// arc `2i + 1` its zero-capacity reverse, so `arc ^ 1` pairs them.
///
/// Nodes are laid out as source, sink, one node per graph vertex, then any
/// auxiliary nodes (clique or instance-group nodes).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    node_count: usize,
    vertex_count: usize,
    scale: i64,
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of graph-vertex nodes (excluding s, t and auxiliary nodes).
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Common denominator that all capacities were multiplied by.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arc indices leaving `node`, forward and reverse alike.
    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn is_vertex(&self, node: usize) -> bool {
        node >= 2 && node < 2 + self.vertex_count
    }

    /// Capacity of the cut `(S, V∖S)` where `in_source_side[v]` marks `S`.
    pub fn cut_capacity(&self, in_source_side: &[bool]) -> i64 {
        self.arcs
            .iter()
            .step_by(2)
            .filter(|a| in_source_side[a.from] && !in_source_side[a.to])
            .map(|a| a.capacity)
            .sum()
    }

    /// DIMACS max-flow text, for cross-checking with external solvers.
    /// Node numbers are 1-based; reverse arcs are omitted.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p max {} {}", self.node_count, self.arcs.len() / 2);
        let _ = writeln!(out, "n {} s", SOURCE + 1);
        let _ = writeln!(out, "n {} t", SINK + 1);
        for a in self.arcs.iter().step_by(2) {
            let _ = writeln!(out, "a {} {} {}", a.from + 1, a.to + 1, a.capacity);
        }
        out
    }
}

/// Capacity request for [`NetworkBuilder::add_arc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(i64),
    Infinite,
}

/// Collects arcs, then resolves infinite capacities to one more than the
/// total finite capacity.
#[derive(Debug)]
pub struct NetworkBuilder {
    node_count: usize,
    vertex_count: usize,
    scale: i64,
    pending: Vec<(usize, usize, Capacity)>,
}

impl NetworkBuilder {
    pub fn new(vertex_count: usize, scale: i64) -> Self {
        NetworkBuilder { node_count: vertex_count + 2, vertex_count, scale, pending: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Capacity) {
        debug_assert!(from < self.node_count && to < self.node_count);
        self.pending.push((from, to, capacity));
    }

    pub fn build(self) -> Result<FlowNetwork> {
        let mut finite: i64 = 0;
        for &(_, _, c) in &self.pending {
            if let Capacity::Finite(c) = c {
                if c < 0 {
                    return Err(Error::Internal(format!("negative capacity {c}")));
                }
                finite = finite.checked_add(c).ok_or(Error::CapacityOverflow)?;
            }
        }
        let infinite = finite.checked_add(1).ok_or(Error::CapacityOverflow)?;
        let mut arcs = Vec::with_capacity(2 * self.pending.len());
        let mut out = vec![Vec::new(); self.node_count];
        for (from, to, c) in self.pending {
            let capacity = match c {
                Capacity::Finite(c) => c,
                Capacity::Infinite => infinite,
            };
            out[from].push(arcs.len());
            arcs.push(Arc { from, to, capacity });
            out[to].push(arcs.len());
            arcs.push(Arc { from: to, to: from, capacity: 0 });
        }
        Ok(FlowNetwork {
            node_count: self.node_count,
            vertex_count: self.vertex_count,
            scale: self.scale,
            arcs,
            out,
        })
    }
}

/// `a * b` with overflow reported as an error.
pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::CapacityOverflow)
}
