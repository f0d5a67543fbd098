//! Exact solver for trees: restrict to the s-C Steiner subtree and try each
//! important s-C separator, placing its vertices in order of distance from s.

use thiserror::Error;

use crate::game::{saves, GameError, GameModel, SacsInstance, Solution, Strategy};
use crate::graph::{GraphError, Vertex, VertexSet};
use crate::separators::{enumerate_important, SeparatorQuery};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("graph is not a tree")]
    NotATree,
    #[error(transparent)]
    Game(#[from] GameError),
}

impl From<GraphError> for TreeError {
    fn from(e: GraphError) -> Self {
        TreeError::Game(e.into())
    }
}

/// An instance restricted to a vertex subset, with the map back to the original ids.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub instance: SacsInstance,
    /// `original[v]` is the id of pruned vertex `v` in the input instance.
    pub original: Vec<Vertex>,
}

/// Keeps exactly the vertices on some path from s to a critical vertex.
pub fn prune_to_relevant(inst: &SacsInstance) -> Result<Pruned, TreeError> {
    let g = &inst.graph;
    if !g.is_tree() {
        return Err(TreeError::NotATree);
    }
    let n = g.vertex_count();
    let dist = g.bfs_distances(inst.source, &VertexSet::new(n))?;
    let mut keep = VertexSet::singleton(n, inst.source);
    for c in inst.critical.iter() {
        let mut v = c;
        while keep.insert(v) {
            let d = dist[v].expect("trees are connected");
            v = g.adj(v).iter().copied().find(|&u| dist[u] == Some(d - 1)).expect("non-root has a parent");
        }
    }
    let (sub, original) = g.induced_subgraph(&keep);
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in original.iter().enumerate() {
        new_id[v] = i;
    }
    let critical = VertexSet::from_iter(sub.vertex_count(), inst.critical.iter().map(|c| new_id[c]));
    let instance = SacsInstance::new(sub, new_id[inst.source], critical, inst.budget)?;
    Ok(Pruned { instance, original })
}

/// Outcome of [`solve_tree`] with the number of separators tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub solution: Solution,
    pub candidates: usize,
}

pub fn solve_tree(inst: &SacsInstance) -> Result<Solution, TreeError> {
    solve_tree_report(inst).map(|r| r.solution)
}

pub fn solve_tree_report(inst: &SacsInstance) -> Result<TreeReport, TreeError> {
    let pruned = prune_to_relevant(inst)?;
    let p = &pruned.instance;
    if p.critical.is_empty() {
        return Ok(TreeReport { solution: Solution::yes(Strategy::new()), candidates: 0 });
    }
    let n = p.vertex_count();
    let dist = p.graph.bfs_distances(p.source, &VertexSet::new(n))?;
    let q = SeparatorQuery::new(&p.graph, VertexSet::singleton(n, p.source), p.critical.clone(), p.budget)
        .expect("source is not critical");
    let candidates = enumerate_important(&q);
    assert!(candidates.len() as u128 <= 4u128.saturating_pow(p.budget as u32));
    for (tried, sep) in candidates.iter().enumerate() {
        let mut order = sep.to_vec();
        order.sort_by_key(|&v| (dist[v], v));
        let local = Strategy::from_turns(order.into_iter().enumerate().map(|(i, v)| (i + 1, v)))?;
        if !saves(p, &local, GameModel::NonSpreading).unwrap_or(false) {
            continue;
        }
        let witness = local.map_vertices(|v| Some(pruned.original[v]))?;
        assert!(saves(inst, &witness, GameModel::NonSpreading)?, "pruned witness fails on the full tree");
        return Ok(TreeReport { solution: Solution::yes(witness), candidates: tried + 1 });
    }
    Ok(TreeReport { solution: Solution::no(), candidates: candidates.len() })
}
