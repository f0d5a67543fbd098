//! Simple undirected graphs over dense vertex ids, vertex sets, and the
//! traversal primitives the solvers are built on.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Vertex identifier, always in `0..vertex_count`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("source vertex {0} is forbidden")]
    SourceForbidden(Vertex),
    #[error("start set and removed set overlap at vertex {0}")]
    Overlap(Vertex),
    #[error("set universe {found} does not match graph size {expected}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
}

/// A subset of `0..universe` backed by a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if any id is outside the universe.
    pub fn from_iter<I: IntoIterator<Item = Vertex>>(universe: usize, ids: I) -> Self {
        let mut set = VertexSet::new(universe);
        for v in ids {
            set.insert(v);
        }
        set
    }

    pub fn singleton(universe: usize, v: Vertex) -> Self {
        VertexSet::from_iter(universe, [v])
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v < self.bits.len(), "vertex {v} outside universe {}", self.bits.len());
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        if v >= self.bits.len() || !self.bits.contains(v) {
            return false;
        }
        self.bits.set(v, false);
        true
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.bits.minimum()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe(), other.universe());
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Complement within the universe.
    pub fn complement(&self) -> VertexSet {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `{1,4,7}`.
impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and dangling ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut builder = GraphBuilder::with_vertices(n);
        for (u, v) in edges {
            builder.add_edge(u, v)?;
        }
        Ok(builder.build())
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::with_vertices(n).build()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adjacency.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.vertex_count() })
        }
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        if set.universe() == self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::UniverseMismatch { expected: self.vertex_count(), found: set.universe() })
        }
    }

    /// Sorted neighbor slice. Panics on an out-of-range id.
    pub fn adj(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Open neighborhood N(v).
    pub fn neighbors(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_iter(self.vertex_count(), self.adjacency[v].iter().copied()))
    }

    /// Closed neighborhood N[v].
    pub fn closed_neighbors(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        let mut set = self.neighbors(v)?;
        set.insert(v);
        Ok(set)
    }

    /// N(X) = vertices outside X with a neighbor in X.
    pub fn set_neighbors(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.vertex_count());
        for v in set.iter() {
            for &u in &self.adjacency[v] {
                if !set.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    /// N[X] = X ∪ N(X).
    pub fn closed_set_neighbors(&self, set: &VertexSet) -> VertexSet {
        self.set_neighbors(set).union(set)
    }

    /// Shortest-path distances from `source` avoiding `forbidden`; `None` is infinity.
    pub fn bfs_distances(&self, source: Vertex, forbidden: &VertexSet) -> Result<Vec<Option<usize>>, GraphError> {
        self.check_vertex(source)?;
        self.check_set(forbidden)?;
        if forbidden.contains(source) {
            return Err(GraphError::SourceForbidden(source));
        }
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or_default();
            for &u in &self.adjacency[v] {
                if dist[u].is_none() && !forbidden.contains(u) {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        Ok(dist)
    }

    /// R(X, S): vertices reachable from X in G - S.
    pub fn reachable_set(&self, from: &VertexSet, removed: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_set(from)?;
        self.check_set(removed)?;
        if let Some(v) = from.intersection(removed).first() {
            return Err(GraphError::Overlap(v));
        }
        Ok(self.reach_unchecked(from, removed))
    }

    pub(crate) fn reach_unchecked(&self, from: &VertexSet, removed: &VertexSet) -> VertexSet {
        let mut seen = from.clone();
        let mut stack: Vec<Vertex> = from.iter().collect();
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if !removed.contains(u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        let start = VertexSet::singleton(self.vertex_count(), 0);
        self.reach_unchecked(&start, &VertexSet::new(self.vertex_count())).len() == self.vertex_count()
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0 && self.edge_count + 1 == self.vertex_count() && self.is_connected()
    }

    /// Induced subgraph on `keep`; returns the graph and the original id of each new vertex.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let old_ids: Vec<Vertex> = keep.iter().collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let mut builder = GraphBuilder::with_vertices(old_ids.len());
        for (u, v) in self.edges() {
            if keep.contains(u) && keep.contains(v) {
                builder.push_edge_unchecked(new_id[u], new_id[v]);
            }
        }
        (builder.build(), old_ids)
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.vertex_count());
        let mut builder = GraphBuilder::with_vertices(self.vertex_count());
        for (u, v) in self.edges() {
            builder.push_edge_unchecked(perm[u], perm[v]);
        }
        builder.build()
    }
}

/// Incremental graph construction; freezes into an immutable [`Graph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    adjacency: Vec<Vec<Vertex>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        GraphBuilder { adjacency: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.adjacency.len();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adjacency[u].contains(&v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.push_edge_unchecked(u, v);
        Ok(())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency.get(u).is_some_and(|ns| ns.contains(&v))
    }

    /// Adds a path of `length` edges from `from` to `to` through fresh internal vertices.
    /// A length of 1 is a direct edge. Returns the internal vertices in order.
    pub fn add_path(&mut self, from: Vertex, to: Vertex, length: usize) -> Result<Vec<Vertex>, GraphError> {
        assert!(length >= 1, "path length must be positive");
        let mut internal = Vec::with_capacity(length - 1);
        let mut prev = from;
        for _ in 1..length {
            let x = self.add_vertex();
            self.add_edge(prev, x)?;
            internal.push(x);
            prev = x;
        }
        self.add_edge(prev, to)?;
        Ok(internal)
    }

    fn push_edge_unchecked(&mut self, u: Vertex, v: Vertex) {
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
    }

    pub fn build(mut self) -> Graph {
        let mut twice = 0;
        for ns in &mut self.adjacency {
            ns.sort_unstable();
            ns.dedup();
            twice += ns.len();
        }
        Graph { adjacency: self.adjacency, edge_count: twice / 2 }
    }
}

/// Side table between external vertex names and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers the next id under `name`.
    pub fn push(&mut self, name: impl Into<String>) -> Result<Vertex, GraphError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(GraphError::DuplicateLabel(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Vertex) -> Option<&str> {
        self.names.get(v).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn neighbors_on_small_graphs() {
        let p = path(3);
        assert_eq!(p.neighbors(1).unwrap().to_vec(), vec![0, 2]);
        assert!(Graph::empty(2).neighbors(1).unwrap().is_empty());
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(k3.vertices().all(|v| k3.neighbors(v).unwrap().len() == 2));
        assert_eq!(k3.closed_neighbors(0).unwrap().len(), 3);
        assert!(matches!(p.neighbors(3), Err(GraphError::VertexOutOfRange { .. })));
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(2, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn distances_on_path() {
        let p = path(4);
        let none = VertexSet::new(4);
        let d = p.bfs_distances(0, &none).unwrap();
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3)]);
        let d = p.bfs_distances(0, &VertexSet::singleton(4, 1)).unwrap();
        assert_eq!(d[2], None);
        assert!(p.bfs_distances(1, &VertexSet::singleton(4, 1)).is_err());
    }

    #[test]
    fn reachability() {
        let p = path(4);
        let s = VertexSet::singleton(4, 0);
        let r = p.reachable_set(&s, &VertexSet::singleton(4, 2)).unwrap();
        assert_eq!(r.to_vec(), vec![0, 1]);
        assert_eq!(p.reachable_set(&s, &VertexSet::new(4)).unwrap().len(), 4);
        let seal = p.neighbors(0).unwrap();
        assert_eq!(p.reachable_set(&s, &seal).unwrap().to_vec(), vec![0]);
        assert!(p.reachable_set(&s, &s).is_err());
    }

    #[test]
    fn paths_and_trees() {
        let mut b = GraphBuilder::with_vertices(2);
        let inner = b.add_path(0, 1, 3).unwrap();
        assert_eq!(inner.len(), 2);
        let g = b.build();
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_tree());
        assert!(!Graph::empty(2).is_tree());
    }

    #[test]
    fn set_display_and_algebra() {
        let a = VertexSet::from_iter(6, [1, 3, 5]);
        let b = VertexSet::from_iter(6, [3, 4]);
        assert_eq!(a.to_string(), "{1,3,5}");
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 5]);
        assert_eq!(a.complement().to_vec(), vec![0, 2, 4]);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec(proptest::bool::weighted(0.3), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjacency_is_symmetric(g in arb_graph()) {
            for u in g.vertices() {
                for &v in g.adj(u) {
                    prop_assert!(g.has_edge(v, u));
                    prop_assert!(v < g.vertex_count());
                }
            }
        }

        #[test]
        fn adjacent_distances_differ_by_at_most_one(g in arb_graph()) {
            let d = g.bfs_distances(0, &VertexSet::new(g.vertex_count())).unwrap();
            for (u, v) in g.edges() {
                if let (Some(a), Some(b)) = (d[u], d[v]) {
                    prop_assert!(a.abs_diff(b) <= 1);
                }
            }
        }

        #[test]
        fn reach_shrinks_as_removed_grows(g in arb_graph(), mask in any::<u16>()) {
            let n = g.vertex_count();
            let x = VertexSet::singleton(n, 0);
            let s1 = VertexSet::from_iter(n, (1..n).filter(|v| mask & (1 << v) != 0 && v % 2 == 0));
            let s2 = VertexSet::from_iter(n, (1..n).filter(|v| mask & (1 << v) != 0));
            let r1 = g.reachable_set(&x, &s1).unwrap();
            let r2 = g.reachable_set(&x, &s2).unwrap();
            prop_assert!(r2.is_subset(&r1));
            let all = g.reachable_set(&x, &VertexSet::new(n)).unwrap();
            let d = g.bfs_distances(0, &VertexSet::new(n)).unwrap();
            prop_assert_eq!(all.to_vec(), (0..n).filter(|&v| d[v].is_some()).collect::<Vec<_>>());
        }
    }
}
