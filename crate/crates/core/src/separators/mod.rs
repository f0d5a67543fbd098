//! Vertex separators: minimum cuts, important separators and tight
//! reachability sequences.
//!
//! An X-Y separator is a vertex set disjoint from X and Y whose removal leaves
//! no path from X to Y. All queries may exclude an extra `removed` set, which
//! acts as if those vertices were deleted from the graph.

mod flow;
mod important;
mod sequence;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

pub use important::{enumerate_important, is_important, smallest_important};
pub use sequence::{audit_sequence, tight_sequence, SeparatorSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("terminal sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("terminal set {0} is empty")]
    EmptySide(&'static str),
    #[error("removed set meets a terminal set at vertex {0}")]
    RemovedTerminal(usize),
    #[error("no separator within the size bound")]
    NoSeparator,
}

/// X-Y separation question in `graph - removed` with a size bound.
#[derive(Debug, Clone)]
pub struct SeparatorQuery<'g> {
    pub graph: &'g Graph,
    pub x: VertexSet,
    pub y: VertexSet,
    pub removed: VertexSet,
    pub bound: usize,
}

impl<'g> SeparatorQuery<'g> {
    pub fn new(graph: &'g Graph, x: VertexSet, y: VertexSet, bound: usize) -> Result<Self, SeparatorError> {
        let removed = VertexSet::new(graph.vertex_count());
        Self::with_removed(graph, x, y, removed, bound)
    }

    pub fn with_removed(
        graph: &'g Graph,
        x: VertexSet,
        y: VertexSet,
        removed: VertexSet,
        bound: usize,
    ) -> Result<Self, SeparatorError> {
        graph.check_set(&x)?;
        graph.check_set(&y)?;
        graph.check_set(&removed)?;
        if x.is_empty() {
            return Err(SeparatorError::EmptySide("X"));
        }
        if y.is_empty() {
            return Err(SeparatorError::EmptySide("Y"));
        }
        if let Some(v) = x.intersection(&y).first() {
            return Err(SeparatorError::Overlap(v));
        }
        if let Some(v) = removed.intersection(&x.union(&y)).first() {
            return Err(SeparatorError::RemovedTerminal(v));
        }
        Ok(SeparatorQuery { graph, x, y, removed, bound })
    }

    /// Same graph and removed set with new terminals.
    pub(crate) fn retarget(&self, x: VertexSet, y: VertexSet) -> SeparatorQuery<'g> {
        SeparatorQuery { graph: self.graph, x, y, removed: self.removed.clone(), bound: self.bound }
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// R(X, S) in `graph - removed`.
    pub fn reach(&self, s: &VertexSet) -> VertexSet {
        self.graph.reach_unchecked(&self.x, &self.removed.union(s))
    }

    pub fn is_separator(&self, s: &VertexSet) -> bool {
        s.is_disjoint(&self.x)
            && s.is_disjoint(&self.y)
            && s.is_disjoint(&self.removed)
            && self.reach(s).is_disjoint(&self.y)
    }

    /// A separator no proper subset of which separates.
    pub fn is_minimal_separator(&self, s: &VertexSet) -> bool {
        if !self.is_separator(s) {
            return false;
        }
        s.iter().all(|v| {
            let mut smaller = s.clone();
            smaller.remove(v);
            !self.is_separator(&smaller)
        })
    }

    fn touches(&self) -> bool {
        flow::touches(self.graph, &self.x, &self.y, &self.removed)
    }

    /// λ(X, Y) if it is at most `limit`; `None` if larger or infinite.
    pub(crate) fn lambda_at_most(&self, limit: usize) -> Option<usize> {
        if self.touches() {
            return None;
        }
        let mut net = flow::FlowNetwork::new(self.graph, &self.x, &self.y, &self.removed);
        let f = net.run(limit);
        (f <= limit).then_some(f)
    }

    /// Minimum cut pushed toward Y with its size, if λ is at most `limit`.
    pub(crate) fn furthest_min_cut(&self, limit: usize) -> Option<(usize, VertexSet)> {
        if self.touches() {
            return None;
        }
        let mut net = flow::FlowNetwork::new(self.graph, &self.x, &self.y, &self.removed);
        let f = net.run(limit);
        (f <= limit).then(|| (f, net.cut_near_sink()))
    }
}

/// Size and witness of a minimum separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinSeparator {
    pub size: usize,
    pub witness: VertexSet,
}

/// λ(X, Y) with a minimum separator, ignoring the query bound.
/// The witness is the minimum cut closest to X.
pub fn min_separator(q: &SeparatorQuery<'_>) -> Result<MinSeparator, SeparatorError> {
    if q.touches() {
        return Err(SeparatorError::NoSeparator);
    }
    let mut net = flow::FlowNetwork::new(q.graph, &q.x, &q.y, &q.removed);
    let size = net.run(q.vertex_count());
    let witness = net.cut_near_source();
    debug_assert_eq!(witness.len(), size);
    debug_assert!(q.is_separator(&witness));
    Ok(MinSeparator { size, witness })
}
