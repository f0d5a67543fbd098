//! Exhaustive game-tree search: the reference decision procedure.
//!
//! The search tries, at every turn, each vertex that is neither burning nor
//! protected, plus an explicit skip. Failed states are memoized on
//! `(turn, burned, protected)`.

pub mod sat;

use std::collections::HashSet;

use thiserror::Error;

use crate::game::{outcome_saves, play, GameError, GameModel, SacsInstance, Solution, Strategy};
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices; the exhaustive search is capped at {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("budget {k} exceeds the exhaustive search cap {cap}")]
    BudgetTooLarge { k: usize, cap: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
    pub max_budget: usize,
    /// Allow turns without a placement. When false every turn must place a
    /// firefighter on some vertex that is neither burning nor protected.
    pub allow_skip: bool,
    pub memoize: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: 16, max_budget: 5, allow_skip: true, memoize: true }
    }
}

impl OracleConfig {
    pub fn with_caps(max_vertices: usize, max_budget: usize) -> Self {
        OracleConfig { max_vertices, max_budget, ..Self::default() }
    }
}

/// Decides the instance with the default caps.
pub fn oracle_solve(inst: &SacsInstance, model: GameModel) -> Result<Solution, OracleError> {
    oracle_solve_with(inst, model, &OracleConfig::default())
}

pub fn oracle_solve_with(
    inst: &SacsInstance,
    model: GameModel,
    config: &OracleConfig,
) -> Result<Solution, OracleError> {
    let n = inst.vertex_count();
    if n > config.max_vertices {
        return Err(OracleError::TooManyVertices { n, cap: config.max_vertices });
    }
    if inst.budget > config.max_budget {
        return Err(OracleError::BudgetTooLarge { k: inst.budget, cap: config.max_budget });
    }
    let mut search = Search { inst, model, config, failed: HashSet::new(), path: Vec::new() };
    let burned = VertexSet::singleton(n, inst.source);
    let protected = VertexSet::new(n);
    if !search.run(1, &burned, &protected) {
        return Ok(Solution::no());
    }
    let witness = Strategy::from_turns(search.path.iter().copied())?;
    // Replay through the game engine so a yes is always certified.
    let out = play(&inst.graph, inst.source, &witness, model).map_err(GameError::from)?;
    assert!(outcome_saves(inst, &witness, &out), "exhaustive search produced a non-saving witness");
    Ok(Solution::yes(witness))
}

struct Search<'a> {
    inst: &'a SacsInstance,
    model: GameModel,
    config: &'a OracleConfig,
    failed: HashSet<(usize, VertexSet, VertexSet)>,
    path: Vec<(usize, Vertex)>,
}

impl Search<'_> {
    fn run(&mut self, turn: usize, burned: &VertexSet, protected: &VertexSet) -> bool {
        let g = &self.inst.graph;
        if !burned.is_disjoint(&self.inst.critical) {
            return false;
        }
        let frontier = g.reach_unchecked(burned, protected);
        if frontier.is_disjoint(&self.inst.critical) {
            // Protection only ever shrinks the fire, so the rest can be skipped.
            return self.config.allow_skip || self.fill_remaining(turn, burned, protected);
        }
        if turn > self.inst.budget {
            return self.model == GameModel::Spreading && settles_safely(g, &self.inst.critical, burned, protected);
        }
        let key = (turn, burned.clone(), protected.clone());
        if self.config.memoize && self.failed.contains(&key) {
            return false;
        }
        let candidates: Vec<Vertex> = if self.config.allow_skip {
            // Vertices the fire can never reach behave like a skip.
            frontier.difference(burned).difference(&self.inst.critical).to_vec()
        } else {
            burned.union(protected).union(&self.inst.critical).complement().to_vec()
        };
        for v in candidates {
            let mut placed = protected.clone();
            placed.insert(v);
            let (b2, p2) = even_step(g, self.model, burned, &placed);
            self.path.push((turn, v));
            if self.run(turn + 1, &b2, &p2) {
                return true;
            }
            self.path.pop();
        }
        if self.config.allow_skip {
            let (b2, p2) = even_step(g, self.model, burned, protected);
            if self.run(turn + 1, &b2, &p2) {
                return true;
            }
        }
        if self.config.memoize {
            self.failed.insert(key);
        }
        false
    }

    /// In no-skip mode, the remaining turns must still place firefighters.
    /// Placements on critical vertices are legal moves but forfeit the save.
    fn fill_remaining(&mut self, turn: usize, burned: &VertexSet, protected: &VertexSet) -> bool {
        if turn > self.inst.budget {
            return true;
        }
        let free = burned.union(protected).union(&self.inst.critical).complement();
        let Some(v) = free.first() else {
            return false;
        };
        let mut placed = protected.clone();
        placed.insert(v);
        let (b2, p2) = even_step(&self.inst.graph, self.model, burned, &placed);
        self.path.push((turn, v));
        if self.fill_remaining(turn + 1, &b2, &p2) {
            return true;
        }
        self.path.pop();
        false
    }
}

/// Runs spreading-model even steps to the fixpoint and checks C stays unburned.
fn settles_safely(g: &Graph, critical: &VertexSet, burned: &VertexSet, protected: &VertexSet) -> bool {
    let (mut b, mut p) = (burned.clone(), protected.clone());
    loop {
        let (b2, p2) = even_step(g, GameModel::Spreading, &b, &p);
        if !b2.is_disjoint(critical) {
            return false;
        }
        if b2 == b && p2 == p {
            return true;
        }
        (b, p) = (b2, p2);
    }
}

/// One even time step: protection spreads first (spreading model), then fire.
fn even_step(g: &Graph, model: GameModel, burned: &VertexSet, protected: &VertexSet) -> (VertexSet, VertexSet) {
    let mut prot = protected.clone();
    if model == GameModel::Spreading {
        let grow = g.set_neighbors(protected).difference(burned);
        prot.union_with(&grow);
    }
    let mut fire = burned.clone();
    fire.union_with(&g.set_neighbors(burned).difference(&prot));
    (fire, prot)
}
