use fixedbitset::FixedBitSet;

use super::dinic::MaxFlow;
use super::network::{FlowNetwork, SINK, SOURCE};
use crate::nodeset::NodeId;

/// Condensation of a residual graph into strongly connected components.
///
/// Component ids follow Tarjan completion order, which is a reverse
/// topological order: every DAG edge `c → d` has `d < c`.
#[derive(Clone, Debug)]
pub struct ComponentDag {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub dag_edges: Vec<Vec<usize>>,
    pub scc_of_source: usize,
    pub scc_of_sink: usize,
    /// Graph vertices (as vertex ids, not network nodes) in each component.
    pub vertex_mask: Vec<Vec<NodeId>>,
}

impl ComponentDag {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components other than those of the source and the sink.
    pub fn is_trivial(&self, c: usize) -> bool {
        c == self.scc_of_source || c == self.scc_of_sink
    }

    /// Strict descendants of every component, as bitsets over component ids.
    pub fn descendants(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut des = vec![FixedBitSet::with_capacity(n); n];
        for c in 0..n {
            for &d in &self.dag_edges[c] {
                let (head, tail) = des.split_at_mut(c);
                tail[0].insert(d);
                tail[0].union_with(&head[d]);
            }
        }
        des
    }

    /// Strict ancestors of every component.
    pub fn ancestors(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut anc = vec![FixedBitSet::with_capacity(n); n];
        for c in (0..n).rev() {
            for &d in &self.dag_edges[c] {
                let (head, tail) = anc.split_at_mut(c);
                head[d].insert(c);
                head[d].union_with(&tail[0]);
            }
        }
        anc
    }
}

/// Tarjan SCC over arcs with positive residual capacity.
pub fn residual_scc_dag(net: &FlowNetwork, flow: &MaxFlow) -> ComponentDag {
    let n = net.node_count();
    let arcs = net.arcs();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    // Explicit DFS frames: (node, position in its out-arc list).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (x, ref mut pos)) = frames.last_mut() {
            let out = net.out_arcs(x);
            if *pos < out.len() {
                let a = out[*pos];
                *pos += 1;
                if flow.residual[a] <= 0 {
                    continue;
                }
                let y = arcs[a].to;
                if index[y] == UNSEEN {
                    index[y] = counter;
                    low[y] = counter;
                    counter += 1;
                    stack.push(y);
                    on_stack[y] = true;
                    frames.push((y, 0));
                } else if on_stack[y] {
                    low[x] = low[x].min(index[y]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[x]);
            }
            if low[x] == index[x] {
                let id = components.len();
                let mut members = Vec::new();
                while let Some(y) = stack.pop() {
                    on_stack[y] = false;
                    component_of[y] = id;
                    members.push(y);
                    if y == x {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(members);
            }
        }
    }

    let mut dag_edges = vec![Vec::new(); components.len()];
    for (a, arc) in arcs.iter().enumerate() {
        if flow.residual[a] > 0 {
            let (c, d) = (component_of[arc.from], component_of[arc.to]);
            if c != d {
                dag_edges[c].push(d);
            }
        }
    }
    for list in &mut dag_edges {
        list.sort_unstable();
        list.dedup();
    }
    let vertex_mask = components
        .iter()
        .map(|members| {
            members.iter().filter(|&&x| net.is_vertex(x)).map(|&x| (x - 2) as NodeId).collect()
        })
        .collect();
    ComponentDag {
        scc_of_source: component_of[SOURCE],
        scc_of_sink: component_of[SINK],
        component_of,
        components,
        dag_edges,
        vertex_mask,
    }
}
