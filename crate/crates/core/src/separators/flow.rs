//! Unit vertex-capacity max flow on the split network.
//!
//! Vertex `v` becomes `in(v) = 2v` and `out(v) = 2v + 1` joined by a unit arc.
//! Terminal sides have no internal arc: the super source feeds `out(x)` and
//! `in(y)` drains into the super sink. Every source-sink path crosses at least
//! one unit arc, so each augmentation adds exactly one unit.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex, VertexSet};

const INF: u32 = u32::MAX / 2;

pub(crate) struct FlowNetwork {
    n: usize,
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    flow: usize,
}

impl FlowNetwork {
    /// Builds the split network for `x`-`y` separation in `graph - removed`.
    /// The caller guarantees `x` is not adjacent to `y` and the sets are disjoint.
    pub(crate) fn new(graph: &Graph, x: &VertexSet, y: &VertexSet, removed: &VertexSet) -> Self {
        let n = graph.vertex_count();
        let mut net = FlowNetwork { n, head: vec![Vec::new(); 2 * n + 2], to: Vec::new(), cap: Vec::new(), flow: 0 };
        let (src, snk) = (2 * n, 2 * n + 1);
        for v in graph.vertices() {
            if removed.contains(v) {
                continue;
            }
            if x.contains(v) {
                net.arc(src, 2 * v + 1, INF);
            } else if y.contains(v) {
                net.arc(2 * v, snk, INF);
            } else {
                net.arc(2 * v, 2 * v + 1, 1);
            }
            if y.contains(v) {
                continue;
            }
            for &u in graph.adj(v) {
                if !removed.contains(u) && !x.contains(u) {
                    net.arc(2 * v + 1, 2 * u, INF);
                }
            }
        }
        net
    }

    fn arc(&mut self, a: usize, b: usize, c: u32) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn source(&self) -> usize {
        2 * self.n
    }

    fn sink(&self) -> usize {
        2 * self.n + 1
    }

    /// Augments until the flow exceeds `limit` or no augmenting path remains.
    /// Returns the flow value, which is `limit + 1` when the bound is exceeded.
    pub(crate) fn run(&mut self, limit: usize) -> usize {
        while self.flow <= limit && self.augment() {
            self.flow += 1;
        }
        self.flow
    }

    fn augment(&mut self) -> bool {
        let (src, snk) = (self.source(), self.sink());
        let mut parent_arc = vec![usize::MAX; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            for &e in &self.head[a] {
                let b = self.to[e];
                if !seen[b] && self.cap[e] > 0 {
                    seen[b] = true;
                    parent_arc[b] = e;
                    if b == snk {
                        let mut cur = snk;
                        while cur != src {
                            let e = parent_arc[cur];
                            self.cap[e] -= 1;
                            self.cap[e ^ 1] += 1;
                            cur = self.to[e ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(b);
                }
            }
        }
        false
    }

    /// Nodes reachable from the source in the residual network.
    fn residual_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[self.source()] = true;
        let mut stack = vec![self.source()];
        while let Some(a) = stack.pop() {
            for &e in &self.head[a] {
                let b = self.to[e];
                if !seen[b] && self.cap[e] > 0 {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen
    }

    /// Nodes that can reach the sink in the residual network.
    fn residual_to_sink(&self) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[self.sink()] = true;
        let mut stack = vec![self.sink()];
        while let Some(b) = stack.pop() {
            for &e in &self.head[b] {
                // e runs b -> a; its reverse e ^ 1 runs a -> b.
                let a = self.to[e];
                if !seen[a] && self.cap[e ^ 1] > 0 {
                    seen[a] = true;
                    stack.push(a);
                }
            }
        }
        seen
    }

    /// Minimum cut closest to the source side. Call after a complete `run`.
    pub(crate) fn cut_near_source(&self) -> VertexSet {
        let side = self.residual_from_source();
        let verts = (0..self.n).filter(|&v| side[2 * v] && !side[2 * v + 1]);
        VertexSet::from_iter(self.n, verts)
    }

    /// Minimum cut closest to the sink side. Call after a complete `run`.
    pub(crate) fn cut_near_sink(&self) -> VertexSet {
        let side = self.residual_to_sink();
        let verts = (0..self.n).filter(|&v| !side[2 * v] && side[2 * v + 1]);
        VertexSet::from_iter(self.n, verts)
    }
}

/// True if some vertex of `x` lies in or next to `y` in `graph - removed`.
pub(crate) fn touches(graph: &Graph, x: &VertexSet, y: &VertexSet, removed: &VertexSet) -> bool {
    !x.is_disjoint(y) || x.iter().any(|v| graph.adj(v).iter().any(|&u: &Vertex| y.contains(u) && !removed.contains(u)))
}
