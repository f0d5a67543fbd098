//! The firefighting game: instances, strategies and deterministic simulation.
//!
//! Time starts at 0 with only the source burning. Firefighter turn `i` happens
//! at odd time `2i - 1`; fire spreads at even times. In the spreading model
//! protection also spreads at even times, before the fire, so a vertex reached
//! by both in the same step ends up protected.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameModel {
    #[default]
    NonSpreading,
    Spreading,
}

/// Why a placement was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidReason {
    Burning,
    Protected,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::Burning => "burning",
            InvalidReason::Protected => "already protected",
        })
    }
}

/// First illegal placement found by a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub turn: usize,
    pub vertex: Vertex,
    pub reason: InvalidReason,
}

impl Violation {
    pub fn step(&self) -> usize {
        turn_step(self.turn)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("source {0} is in the critical set")]
    SourceCritical(Vertex),
    #[error("turn must be at least 1")]
    TurnZero,
    #[error("step {0} is not an odd time step")]
    EvenStep(usize),
    #[error("turn {turn} exceeds the budget {budget}")]
    TurnOutOfRange { turn: usize, budget: usize },
    #[error("vertex {vertex} is protected twice (turns {first} and {second})")]
    DuplicateVertex { vertex: Vertex, first: usize, second: usize },
    #[error("turn {0} is assigned twice")]
    DuplicateTurn(usize),
    #[error("invalid strategy at step {}: vertex {} is {}", .0.step(), .0.vertex, .0.reason)]
    InvalidStrategy(Violation),
}

/// Time step of firefighter turn `turn`.
pub fn turn_step(turn: usize) -> usize {
    2 * turn - 1
}

/// An instance (G, s, C, k) of the critical-set problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SacsInstance {
    pub graph: Graph,
    pub source: Vertex,
    pub critical: VertexSet,
    pub budget: usize,
}

impl SacsInstance {
    pub fn new(graph: Graph, source: Vertex, critical: VertexSet, budget: usize) -> Result<Self, GameError> {
        graph.check_vertex(source)?;
        graph.check_set(&critical)?;
        if critical.contains(source) {
            return Err(GameError::SourceCritical(source));
        }
        Ok(SacsInstance { graph, source, critical, budget })
    }

    /// Convenience constructor from a critical id list.
    pub fn from_parts(graph: Graph, source: Vertex, critical: &[Vertex], budget: usize) -> Result<Self, GameError> {
        for &c in critical {
            graph.check_vertex(c)?;
        }
        let set = VertexSet::from_iter(graph.vertex_count(), critical.iter().copied());
        Self::new(graph, source, set, budget)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}

/// Partial map from firefighter turns (1-based) to vertices, injective on vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    placements: BTreeMap<usize, Vertex>,
}

impl Strategy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_turns<I: IntoIterator<Item = (usize, Vertex)>>(pairs: I) -> Result<Self, GameError> {
        let mut s = Strategy::new();
        for (turn, v) in pairs {
            s.place(turn, v)?;
        }
        Ok(s)
    }

    /// Builds from `(odd time step, vertex)` pairs.
    pub fn from_steps<I: IntoIterator<Item = (usize, Vertex)>>(pairs: I) -> Result<Self, GameError> {
        let mut s = Strategy::new();
        for (step, v) in pairs {
            if step % 2 == 0 {
                return Err(GameError::EvenStep(step));
            }
            s.place(step.div_ceil(2), v)?;
        }
        Ok(s)
    }

    pub fn place(&mut self, turn: usize, v: Vertex) -> Result<(), GameError> {
        if turn == 0 {
            return Err(GameError::TurnZero);
        }
        if self.placements.contains_key(&turn) {
            return Err(GameError::DuplicateTurn(turn));
        }
        if let Some(first) = self.turn_of(v) {
            return Err(GameError::DuplicateVertex { vertex: v, first, second: turn });
        }
        self.placements.insert(turn, v);
        Ok(())
    }

    pub fn get(&self, turn: usize) -> Option<Vertex> {
        self.placements.get(&turn).copied()
    }

    pub fn turn_of(&self, v: Vertex) -> Option<usize> {
        self.placements.iter().find(|&(_, &w)| w == v).map(|(&t, _)| t)
    }

    /// `(turn, vertex)` pairs in turn order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        self.placements.iter().map(|(&t, &v)| (t, v))
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn last_turn(&self) -> usize {
        self.placements.keys().next_back().copied().unwrap_or(0)
    }

    pub fn protected_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter(n, self.placements.values().copied())
    }

    /// Restriction to the turns accepted by `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(usize) -> bool) -> Strategy {
        Strategy { placements: self.placements.iter().filter(|(&t, _)| keep(t)).map(|(&t, &v)| (t, v)).collect() }
    }

    /// Applies `f` to every vertex, dropping placements mapped to `None`.
    pub fn map_vertices(&self, mut f: impl FnMut(Vertex) -> Option<Vertex>) -> Result<Strategy, GameError> {
        Strategy::from_turns(self.placements.iter().filter_map(|(&t, &v)| f(v).map(|w| (t, w))))
    }

    /// Union of two strategies with disjoint turns and vertices.
    pub fn merged(&self, other: &Strategy) -> Result<Strategy, GameError> {
        let mut out = self.clone();
        for (t, v) in other.iter() {
            out.place(t, v)?;
        }
        Ok(out)
    }
}

/// Burn and protection times of every vertex for one play of the game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub burn_time: Vec<Option<usize>>,
    pub protect_time: Vec<Option<usize>>,
    /// Last time step simulated; nothing changes afterwards.
    pub end_time: usize,
    /// The first illegal placement, if any. Simulation stops there.
    pub violation: Option<Violation>,
}

impl Outcome {
    pub fn burned(&self) -> VertexSet {
        let n = self.burn_time.len();
        VertexSet::from_iter(n, (0..n).filter(|&v| self.burn_time[v].is_some()))
    }

    pub fn protected(&self) -> VertexSet {
        let n = self.protect_time.len();
        VertexSet::from_iter(n, (0..n).filter(|&v| self.protect_time[v].is_some()))
    }

    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    /// A fire path `source = u_0, ..., u_d = v` with `u_i` burning at time `2i`.
    pub fn fire_path(&self, graph: &Graph, v: Vertex) -> Option<Vec<Vertex>> {
        let mut t = self.burn_time[v]?;
        let mut path = vec![v];
        let mut cur = v;
        while t > 0 {
            cur = graph.adj(cur).iter().copied().find(|&u| self.burn_time[u] == Some(t - 2))?;
            path.push(cur);
            t -= 2;
        }
        path.reverse();
        Some(path)
    }
}

/// Plays `strategy` on `graph` from `source` without a budget check.
/// Validity problems are reported in [`Outcome::violation`], not as errors.
pub fn play(graph: &Graph, source: Vertex, strategy: &Strategy, model: GameModel) -> Result<Outcome, GraphError> {
    graph.check_vertex(source)?;
    for (_, v) in strategy.iter() {
        graph.check_vertex(v)?;
    }
    let n = graph.vertex_count();
    let mut burn_time = vec![None; n];
    let mut protect_time: Vec<Option<usize>> = vec![None; n];
    burn_time[source] = Some(0);
    let mut fire_front = vec![source];
    let mut guard_front: Vec<Vertex> = Vec::new();
    let last_turn = strategy.last_turn();
    let mut t: usize = 0;
    loop {
        t += 1;
        if t % 2 == 1 {
            let turn = t.div_ceil(2);
            if let Some(v) = strategy.get(turn) {
                let reason = if burn_time[v].is_some() {
                    Some(InvalidReason::Burning)
                } else if protect_time[v].is_some() {
                    Some(InvalidReason::Protected)
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Ok(Outcome {
                        burn_time,
                        protect_time,
                        end_time: t - 1,
                        violation: Some(Violation { turn, vertex: v, reason }),
                    });
                }
                protect_time[v] = Some(t);
                guard_front.push(v);
            }
            continue;
        }
        let mut new_guard = Vec::new();
        if model == GameModel::Spreading {
            for &p in &guard_front {
                for &u in graph.adj(p) {
                    if burn_time[u].is_none() && protect_time[u].is_none() {
                        protect_time[u] = Some(t);
                        new_guard.push(u);
                    }
                }
            }
        }
        let mut new_fire = Vec::new();
        for &b in &fire_front {
            for &u in graph.adj(b) {
                if burn_time[u].is_none() && protect_time[u].is_none() {
                    burn_time[u] = Some(t);
                    new_fire.push(u);
                }
            }
        }
        guard_front = new_guard;
        fire_front = new_fire;
        if t >= 2 * last_turn && fire_front.is_empty() && guard_front.is_empty() {
            break;
        }
    }
    debug_assert!((0..n).all(|v| burn_time[v].is_none() || protect_time[v].is_none()));
    Ok(Outcome { burn_time, protect_time, end_time: t, violation: None })
}

/// Burned and protected sets at one time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub time: usize,
    pub burned: VertexSet,
    pub protected: VertexSet,
}

/// Per-step snapshots from time 0 to the fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTrace {
    pub snapshots: Vec<Snapshot>,
    /// True once the fire can no longer spread.
    pub terminal: bool,
}

impl GameTrace {
    pub fn from_outcome(out: &Outcome) -> GameTrace {
        let n = out.burn_time.len();
        let snapshots = (0..=out.end_time)
            .map(|time| {
                let burned = VertexSet::from_iter(n, (0..n).filter(|&v| out.burn_time[v].is_some_and(|b| b <= time)));
                let protected =
                    VertexSet::from_iter(n, (0..n).filter(|&v| out.protect_time[v].is_some_and(|p| p <= time)));
                assert!(burned.is_disjoint(&protected), "vertex both burned and protected at time {time}");
                Snapshot { time, burned, protected }
            })
            .collect();
        GameTrace { snapshots, terminal: out.violation.is_none() }
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trace always has time 0")
    }

    pub fn final_burned(&self) -> &VertexSet {
        &self.last().burned
    }

    pub fn final_protected(&self) -> &VertexSet {
        &self.last().protected
    }

    /// Text log, one `t=<time> burned=<ids> protected=<ids>` line per step.
    /// Ids are comma separated in ascending order; an empty set is left blank.
    pub fn to_log(&self) -> String {
        let ids = |s: &VertexSet| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        for snap in &self.snapshots {
            out.push_str(&format!("t={} burned={} protected={}\n", snap.time, ids(&snap.burned), ids(&snap.protected)));
        }
        out
    }
}

fn check_turns(inst: &SacsInstance, strat: &Strategy) -> Result<(), GameError> {
    if strat.last_turn() > inst.budget {
        return Err(GameError::TurnOutOfRange { turn: strat.last_turn(), budget: inst.budget });
    }
    Ok(())
}

/// Runs the game to its fixpoint.
pub fn simulate(inst: &SacsInstance, strat: &Strategy, model: GameModel) -> Result<GameTrace, GameError> {
    check_turns(inst, strat)?;
    let out = play(&inst.graph, inst.source, strat, model)?;
    if let Some(v) = out.violation {
        return Err(GameError::InvalidStrategy(v));
    }
    Ok(GameTrace::from_outcome(&out))
}

/// True iff the strategy is valid, no critical vertex ever burns, and no
/// firefighter stands on a critical vertex. Protected sets must separate s
/// from C without using C itself, so guarding a critical vertex directly does
/// not count; in the spreading model critical vertices may still be protected
/// by spread.
pub fn saves(inst: &SacsInstance, strat: &Strategy, model: GameModel) -> Result<bool, GameError> {
    check_turns(inst, strat)?;
    let out = play(&inst.graph, inst.source, strat, model)?;
    if let Some(v) = out.violation {
        return Err(GameError::InvalidStrategy(v));
    }
    Ok(outcome_saves(inst, strat, &out))
}

pub(crate) fn outcome_saves(inst: &SacsInstance, strat: &Strategy, out: &Outcome) -> bool {
    out.is_valid()
        && inst.critical.iter().all(|c| out.burn_time[c].is_none())
        && strat.iter().all(|(_, v)| !inst.critical.contains(v))
}

/// Decision with an optional certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub answer: bool,
    /// Present exactly when `answer` is true.
    pub witness: Option<Strategy>,
}

impl Solution {
    pub fn yes(witness: Strategy) -> Self {
        Solution { answer: true, witness: Some(witness) }
    }

    pub fn no() -> Self {
        Solution { answer: false, witness: None }
    }
}

/// True iff every placement lands on a vertex that is neither burning nor protected.
pub fn validate_partial(inst: &SacsInstance, strat: &Strategy, model: GameModel) -> Result<bool, GameError> {
    check_turns(inst, strat)?;
    Ok(play(&inst.graph, inst.source, strat, model)?.is_valid())
}
