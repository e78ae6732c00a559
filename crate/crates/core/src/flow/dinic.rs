use std::collections::VecDeque;

use super::network::{FlowNetwork, SINK, SOURCE};

/// Solved maximum flow: its value and the remaining capacity of every arc
/// (reverse arcs included, so `residual[a ^ 1]` is the flow on arc `a`).
#[derive(Clone, Debug)]
pub struct MaxFlow {
    pub value: i64,
    pub residual: Vec<i64>,
}

impl MaxFlow {
    /// Nodes reachable from the source through positive residual arcs; this
    /// is the source side of the minimum cut closest to `s`.
    pub fn source_side(&self, net: &FlowNetwork) -> Vec<bool> {
        let mut seen = vec![false; net.node_count()];
        seen[SOURCE] = true;
        let mut stack = vec![SOURCE];
        while let Some(x) = stack.pop() {
            for &a in net.out_arcs(x) {
                let y = net.arcs()[a].to;
                if self.residual[a] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Nodes that can still reach the sink through positive residual arcs.
    pub fn reaches_sink(&self, net: &FlowNetwork) -> Vec<bool> {
        let mut seen = vec![false; net.node_count()];
        seen[SINK] = true;
        let mut stack = vec![SINK];
        while let Some(y) = stack.pop() {
            // Arc x→y is `a ^ 1` for every arc `a` leaving y.
            for &a in net.out_arcs(y) {
                let x = net.arcs()[a].to;
                if self.residual[a ^ 1] > 0 && !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        seen
    }
}

/// Dinic's algorithm with an explicit path stack (no recursion, so long
/// level graphs cannot overflow the call stack).
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let n = net.node_count();
    let arcs = net.arcs();
    let mut residual: Vec<i64> = arcs.iter().map(|a| a.capacity).collect();
    let mut value = 0i64;
    let mut level = vec![u32::MAX; n];
    let mut next = vec![0usize; n];
    let mut queue = VecDeque::new();
    let mut path: Vec<usize> = Vec::new();

    loop {
        level.fill(u32::MAX);
        level[SOURCE] = 0;
        queue.clear();
        queue.push_back(SOURCE);
        while let Some(x) = queue.pop_front() {
            for &a in net.out_arcs(x) {
                let y = arcs[a].to;
                if residual[a] > 0 && level[y] == u32::MAX {
                    level[y] = level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if level[SINK] == u32::MAX {
            break;
        }
        next.fill(0);
        path.clear();
        let mut x = SOURCE;
        loop {
            if x == SINK {
                let push = path.iter().map(|&a| residual[a]).min().unwrap_or(0);
                for &a in &path {
                    residual[a] -= push;
                    residual[a ^ 1] += push;
                }
                value += push;
                // Back up to the tail of the first saturated arc.
                let cut = path.iter().position(|&a| residual[a] == 0).unwrap_or(0);
                path.truncate(cut);
                x = path.last().map_or(SOURCE, |&a| arcs[a].to);
                continue;
            }
            let out = net.out_arcs(x);
            let mut advanced = false;
            while next[x] < out.len() {
                let a = out[next[x]];
                let y = arcs[a].to;
                if residual[a] > 0 && level[y] == level[x] + 1 {
                    path.push(a);
                    x = y;
                    advanced = true;
                    break;
                }
                next[x] += 1;
            }
            if !advanced {
                // Dead end: retire x from this phase.
                level[x] = u32::MAX;
                match path.pop() {
                    Some(a) => {
                        x = arcs[a].from;
                        next[x] += 1;
                    }
                    None => break,
                }
            }
        }
    }
    MaxFlow { value, residual }
}

#[cfg(test)]
mod tests {
    use super::super::network::{Capacity, NetworkBuilder};
    use super::*;
    use proptest::prelude::*;

    fn network(nodes: usize, arcs: &[(usize, usize, i64)]) -> FlowNetwork {
        let mut b = NetworkBuilder::new(nodes - 2, 1);
        for &(u, v, c) in arcs {
            b.add_arc(u, v, Capacity::Finite(c));
        }
        b.build().unwrap()
    }

    #[test]
    fn single_arc() {
        let net = network(2, &[(SOURCE, SINK, 5)]);
        assert_eq!(max_flow(&net).value, 5);
    }

    #[test]
    fn diamond_with_cross_arc() {
        let net = network(4, &[(0, 2, 3), (0, 3, 2), (2, 3, 5), (2, 1, 2), (3, 1, 3)]);
        assert_eq!(max_flow(&net).value, 5);
    }

    fn check_conservation(net: &FlowNetwork, flow: &MaxFlow) {
        let mut balance = vec![0i64; net.node_count()];
        for (i, a) in net.arcs().iter().enumerate().step_by(2) {
            let f = flow.residual[i ^ 1];
            assert!(f >= 0 && f <= a.capacity);
            balance[a.from] -= f;
            balance[a.to] += f;
        }
        for (v, b) in balance.iter().enumerate().skip(2) {
            assert_eq!(*b, 0, "conservation at {v}");
        }
        assert_eq!(balance[SINK], flow.value);
    }

    proptest! {
        #[test]
        fn matches_min_cut_enumeration(
            nodes in 2usize..9,
            raw in proptest::collection::vec((0usize..9, 0usize..9, 0i64..6), 0..24),
        ) {
            let arcs: Vec<_> = raw.into_iter()
                .map(|(u, v, c)| (u % nodes, v % nodes, c))
                .filter(|(u, v, _)| u != v)
                .collect();
            let net = network(nodes, &arcs);
            let flow = max_flow(&net);
            check_conservation(&net, &flow);
            let inner = nodes - 2;
            let mut best = i64::MAX;
            for mask in 0u32..1 << inner {
                let mut side = vec![false; nodes];
                side[SOURCE] = true;
                for i in 0..inner {
                    side[i + 2] = mask >> i & 1 == 1;
                }
                best = best.min(net.cut_capacity(&side));
            }
            prop_assert_eq!(flow.value, best);
            prop_assert_eq!(net.cut_capacity(&flow.source_side(&net)), best);
        }
    }
}
