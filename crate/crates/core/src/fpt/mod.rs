//! Parameterized solver for general graphs.
//!
//! The solver works on a restricted variant in which some turns carry
//! prescribed firefighters and the remaining (free) turns are to be chosen.
//! A plain instance with budget k becomes a restricted one with horizon
//! `k + 1`, free turns `1..=k` and an isolated anchor guarded at turn `k + 1`.
//!
//! Each node computes a tight separator sequence between the source and the
//! critical set, guesses which free turns go to which separator or region and
//! how the strategy looks on every separator vertex, and recurses into one
//! child per region with strictly fewer free turns.

pub mod gadget;
pub mod labeling;

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::game::{play, saves, GameError, GameModel, InvalidReason, SacsInstance, Solution, Strategy};
use crate::graph::{Graph, GraphBuilder, GraphError, Vertex, VertexSet};
use crate::separators::{SeparatorError, SeparatorQuery};

pub use gadget::{Child, Decomposition};
pub use labeling::{adjacent_compatible, for_each_partition, passive_labels, Label, Labeling, TimePartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FptError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
    #[error("the parameterized solver handles the non-spreading model only")]
    UnsupportedModel,
    #[error("invalid restricted instance: {0}")]
    InvalidInstance(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<GraphError> for FptError {
    fn from(e: GraphError) -> Self {
        FptError::Game(e.into())
    }
}

/// Instance with prescribed placements `fixed` and free turns `free`.
/// The last turn `horizon` is fixed and guards `anchor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SacsRInstance {
    pub graph: Graph,
    pub source: Vertex,
    pub critical: VertexSet,
    pub horizon: usize,
    pub anchor: Vertex,
    pub free: BTreeSet<usize>,
    pub fixed: Strategy,
}

impl SacsRInstance {
    pub fn new(
        graph: Graph,
        source: Vertex,
        critical: VertexSet,
        horizon: usize,
        anchor: Vertex,
        free: impl IntoIterator<Item = usize>,
        fixed: Strategy,
    ) -> Result<Self, FptError> {
        let bad = |m: String| Err(FptError::InvalidInstance(m));
        graph.check_vertex(source)?;
        graph.check_vertex(anchor)?;
        graph.check_set(&critical)?;
        let free: BTreeSet<usize> = free.into_iter().collect();
        if fixed.get(horizon) != Some(anchor) {
            return bad(format!("turn {horizon} must guard the anchor {anchor}"));
        }
        if let Some(&t) = free.iter().find(|&&t| t == 0 || t >= horizon || fixed.get(t).is_some()) {
            return bad(format!("free turn {t} is out of range or already fixed"));
        }
        if fixed.last_turn() > horizon {
            return bad(format!("fixed turn {} exceeds the horizon", fixed.last_turn()));
        }
        for (_, v) in fixed.iter() {
            graph.check_vertex(v)?;
            if v == source || critical.contains(v) {
                return bad(format!("fixed vertex {v} is the source or critical"));
            }
        }
        if critical.contains(source) {
            return bad("source is critical".into());
        }
        Ok(SacsRInstance { graph, source, critical, horizon, anchor, free, fixed })
    }

    /// Adds an isolated anchor and makes turns `1..=k` free.
    pub fn from_sacs(inst: &SacsInstance) -> Self {
        let n = inst.vertex_count();
        let mut b = GraphBuilder::with_vertices(n + 1);
        for (u, v) in inst.graph.edges() {
            b.add_edge(u, v).expect("edges of a valid graph");
        }
        let critical = VertexSet::from_iter(n + 1, inst.critical.iter());
        let k = inst.budget;
        let fixed = Strategy::from_turns([(k + 1, n)]).expect("single placement");
        SacsRInstance::new(b.build(), inst.source, critical, k + 1, n, 1..=k, fixed).expect("wrapped instance is valid")
    }

    /// Number of free turns.
    pub fn p(&self) -> usize {
        self.free.len()
    }

    /// Vertices with prescribed firefighters.
    pub fn fixed_set(&self) -> VertexSet {
        self.fixed.protected_set(self.graph.vertex_count())
    }

    /// True iff `full` extends the fixed placements using free turns only,
    /// is valid, never guards a critical vertex, and keeps C unburned.
    pub fn accepts(&self, full: &Strategy) -> Result<bool, FptError> {
        if self.fixed.iter().any(|(t, v)| full.get(t) != Some(v)) {
            return Ok(false);
        }
        if full.iter().any(|(t, _)| self.fixed.get(t).is_none() && !self.free.contains(&t)) {
            return Ok(false);
        }
        let out = play(&self.graph, self.source, full, GameModel::NonSpreading)?;
        Ok(out.is_valid()
            && self.critical.iter().all(|c| out.burn_time[c].is_none())
            && full.iter().all(|(_, v)| !self.critical.contains(v)))
    }
}

/// Work counters of one solver run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FptStats {
    pub nodes: usize,
    pub max_depth: usize,
    pub max_sequence: usize,
    /// Admissible time partitions examined, summed over nodes.
    pub partitions: usize,
    /// Complete separator labelings reached, summed over nodes.
    pub labelings: usize,
    pub children: usize,
    pub memo_hits: usize,
    /// Nodes already separated by their fixed placements.
    pub repairs: usize,
    /// Nodes decided by the last separator of a long sequence.
    pub short_sequences: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptReport {
    pub solution: Solution,
    pub stats: FptStats,
}

pub fn solve_sacs(inst: &SacsInstance) -> Result<Solution, FptError> {
    solve_sacs_report(inst).map(|r| r.solution)
}

pub fn solve_sacs_report(inst: &SacsInstance) -> Result<FptReport, FptError> {
    let wrapped = SacsRInstance::from_sacs(inst);
    let (found, stats) = solve_sacs_r_report(&wrapped)?;
    let solution = match found {
        Some(w) => {
            let w = w.restricted(|t| t <= inst.budget);
            if !saves(inst, &w, GameModel::NonSpreading)? {
                return Err(FptError::Internal("witness fails on the input instance".into()));
            }
            Solution::yes(w)
        }
        None => Solution::no(),
    };
    Ok(FptReport { solution, stats })
}

/// A full strategy (fixed plus free placements) that saves C, if one exists.
pub fn solve_sacs_r(inst: &SacsRInstance) -> Result<Option<Strategy>, FptError> {
    solve_sacs_r_report(inst).map(|r| r.0)
}

pub fn solve_sacs_r_report(inst: &SacsRInstance) -> Result<(Option<Strategy>, FptStats), FptError> {
    let mut solver = Solver { stats: FptStats::default(), root_p: inst.p() };
    let found = solver.solve(inst, 0)?;
    Ok((found, solver.stats))
}

type ChildKey = (usize, Vec<(Vertex, Label)>, Vec<usize>);

struct Solver {
    stats: FptStats,
    root_p: usize,
}

/// Per-partition search state.
struct Search<'a> {
    inst: &'a SacsRInstance,
    dec: &'a Decomposition,
    tp: &'a TimePartition,
    depth: usize,
    lab: Labeling,
    witnesses: Vec<Strategy>,
    /// `(i, labels of S_i)` for which children `i + 1..=q + 1` cannot all be solved.
    dead: HashSet<(usize, Vec<(Vertex, Label)>)>,
    labelings: u128,
}

impl Solver {
    fn solve(&mut self, inst: &SacsRInstance, depth: usize) -> Result<Option<Strategy>, FptError> {
        if depth > self.root_p {
            return Err(FptError::Internal(format!("recursion depth {depth} exceeds {}", self.root_p)));
        }
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let found = self.solve_node(inst, depth)?;
        if let Some(w) = &found {
            if !inst.accepts(w)? {
                return Err(FptError::Internal(format!("node at depth {depth} returned a failing strategy")));
            }
        }
        Ok(found)
    }

    fn solve_node(&mut self, inst: &SacsRInstance, depth: usize) -> Result<Option<Strategy>, FptError> {
        let g = &inst.graph;
        let n = g.vertex_count();
        let y = inst.fixed_set();
        let p = inst.p();
        let separated = g.reach_unchecked(&VertexSet::singleton(n, inst.source), &y).is_disjoint(&inst.critical);
        if !separated {
            let q = SeparatorQuery::with_removed(g, VertexSet::singleton(n, inst.source), inst.critical.clone(), y, p)?;
            if q.lambda_at_most(p).is_none() {
                return Ok(None);
            }
        }
        if separated {
            self.stats.repairs += 1;
            return repair(inst);
        }
        let dec = Decomposition::new(inst)?;
        let q = dec.q();
        self.stats.max_sequence = self.stats.max_sequence.max(q);
        if q > inst.horizon {
            if let Some(w) = last_separator_strategy(inst, &dec)? {
                self.stats.short_sequences += 1;
                return Ok(Some(w));
            }
        }
        self.branch(inst, &dec, depth)
    }

    fn branch(
        &mut self,
        inst: &SacsRInstance,
        dec: &Decomposition,
        depth: usize,
    ) -> Result<Option<Strategy>, FptError> {
        let q = dec.q();
        let p = inst.p();
        let free: Vec<usize> = inst.free.iter().copied().collect();
        let separator_size: usize = dec.boundaries[1..].iter().map(VertexSet::len).sum();
        let alphabet = (p + inst.horizon + 1) as u128;
        let mut label_cap = pow_sat(alphabet, separator_size);
        if q <= inst.horizon {
            label_cap = label_cap.min(pow_sat(alphabet, inst.horizon * p));
        }
        let partition_cap = pow_sat((2 * q + 1) as u128, p);

        let mut memo: HashMap<ChildKey, Option<Strategy>> = HashMap::new();
        let mut considered: u128 = 0;
        let mut result: Result<Option<Strategy>, FptError> = Ok(None);
        for_each_partition(&free, q, |tp| {
            if !admissible(inst, dec, &tp) {
                return false;
            }
            considered += 1;
            self.stats.partitions += 1;
            let mut search = Search {
                inst,
                dec,
                tp: &tp,
                depth,
                lab: Labeling::new(),
                witnesses: Vec::new(),
                dead: HashSet::new(),
                labelings: 0,
            };
            let step = self.extend(&mut search, 1, &mut memo);
            if search.labelings > label_cap {
                result =
                    Err(FptError::Internal(format!("{} labelings exceed the bound {label_cap}", search.labelings)));
                return true;
            }
            match step {
                Ok(false) => false,
                Ok(true) => {
                    result = dec.merge(inst, &search.lab, &search.witnesses).map(Some);
                    true
                }
                Err(e) => {
                    result = Err(e);
                    true
                }
            }
        });
        if considered > partition_cap {
            return Err(FptError::Internal(format!("{considered} partitions exceed the bound {partition_cap}")));
        }
        result
    }

    /// Labels `S_i` and solves child `i`, then continues with `i + 1`.
    /// Children `1..i` are solved and their strategies are in `search.witnesses`.
    fn extend(
        &mut self,
        s: &mut Search<'_>,
        i: usize,
        memo: &mut HashMap<ChildKey, Option<Strategy>>,
    ) -> Result<bool, FptError> {
        let q = s.dec.q();
        if i == q + 1 {
            s.labelings += 1;
            self.stats.labelings += 1;
            return Ok(match self.child(s, i, memo)? {
                Some(w) => {
                    s.witnesses.push(w);
                    true
                }
                None => false,
            });
        }
        for option in layer_options(s, i) {
            let key = (i, option.clone());
            if s.dead.contains(&key) {
                continue;
            }
            s.lab.extend(option.iter().copied());
            if let Some(w) = self.child(s, i, memo)? {
                s.witnesses.push(w);
                if self.extend(s, i + 1, memo)? {
                    return Ok(true);
                }
                s.witnesses.pop();
                s.dead.insert(key);
            }
            for (v, _) in &option {
                s.lab.remove(v);
            }
        }
        Ok(false)
    }

    /// Child `i` under the current labeling, as placements on parent vertices at turns in `B_i`.
    fn child(
        &mut self,
        s: &Search<'_>,
        i: usize,
        memo: &mut HashMap<ChildKey, Option<Strategy>>,
    ) -> Result<Option<Strategy>, FptError> {
        let labels: Vec<(Vertex, Label)> = s.dec.child_boundary(i).into_iter().map(|v| (v, s.lab[&v])).collect();
        let key = (i, labels, s.tp.b[i].iter().copied().collect());
        if let Some(hit) = memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(hit.clone());
        }
        let child = s.dec.build_child(s.inst, i, s.tp, &s.lab)?;
        self.stats.children += 1;
        if child.instance.p() >= s.inst.p() {
            return Err(FptError::Internal(format!(
                "child {i} keeps {} of {} free turns",
                child.instance.p(),
                s.inst.p()
            )));
        }
        let found = match self.solve(&child.instance, s.depth + 1)? {
            Some(w) => {
                s.dec.check_child_timing(&child, &s.lab, &w)?;
                let own = w.restricted(|t| s.tp.b[i].contains(&t));
                Some(own.map_vertices(|v| child.back[v])?)
            }
            None => None,
        };
        memo.insert(key, found.clone());
        Ok(found)
    }
}

/// Cheap necessary conditions on a partition.
fn admissible(inst: &SacsRInstance, dec: &Decomposition, tp: &TimePartition) -> bool {
    let q = dec.q();
    if tp.is_trivial(inst.p()) {
        return false;
    }
    for i in 1..=q {
        let sep = &dec.boundaries[i];
        if tp.a[i].len() > sep.len() || tp.b[i].len() > dec.regions[i].len() {
            return false;
        }
    }
    true
}

/// Consistent labelings of `S_i` that use every turn of `A_i` exactly once.
fn layer_options(s: &Search<'_>, i: usize) -> Vec<Vec<(Vertex, Label)>> {
    let verts = s.dec.boundaries[i].to_vec();
    let turns: Vec<usize> = s.tp.a[i].iter().copied().collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; turns.len()];
    layer_rec(s, &verts, &turns, &mut used, &mut cur, &mut out);
    out
}

fn layer_rec(
    s: &Search<'_>,
    verts: &[Vertex],
    turns: &[usize],
    used: &mut [bool],
    cur: &mut Vec<(Vertex, Label)>,
    out: &mut Vec<Vec<(Vertex, Label)>>,
) {
    let k = cur.len();
    let unused = used.iter().filter(|u| !**u).count();
    if verts.len() - k < unused {
        return;
    }
    if k == verts.len() {
        out.push(cur.clone());
        return;
    }
    let v = verts[k];
    let d = s.dec.distance(v);
    let mut options = Vec::new();
    for (idx, &j) in turns.iter().enumerate() {
        if !used[idx] {
            options.push((Some(idx), Label::Firefighter(j)));
        }
    }
    if d == usize::MAX {
        options.push((None, Label::Saved));
    } else {
        options.extend(passive_labels(d, s.inst.horizon).into_iter().map(|l| (None, l)));
    }
    for (idx, l) in options {
        if !fits(s, cur, v, l) {
            continue;
        }
        if let Some(idx) = idx {
            used[idx] = true;
        }
        cur.push((v, l));
        layer_rec(s, verts, turns, used, cur, out);
        cur.pop();
        if let Some(idx) = idx {
            used[idx] = false;
        }
    }
}

/// Compatibility of label `l` on `v` with every neighbor whose footprint is
/// already known: the source, fixed vertices, and labeled separator vertices.
fn fits(s: &Search<'_>, cur: &[(Vertex, Label)], v: Vertex, l: Label) -> bool {
    let inst = s.inst;
    inst.graph.adj(v).iter().all(|&u| {
        let known = if u == inst.source {
            Some(Label::Burns(0))
        } else if let Some(t) = inst.fixed.turn_of(u) {
            Some(Label::Firefighter(t))
        } else if let Some(&lu) = s.lab.get(&u) {
            Some(lu)
        } else {
            cur.iter().find(|(w, _)| *w == u).map(|&(_, lu)| lu)
        };
        known.is_none_or(|lu| adjacent_compatible(l, lu))
    })
}

/// Guards the last separator in order of distance on the earliest free turns.
fn last_separator_strategy(inst: &SacsRInstance, dec: &Decomposition) -> Result<Option<Strategy>, FptError> {
    let mut order = dec.boundaries[dec.q()].to_vec();
    order.sort_by_key(|&v| (dec.distance(v), v));
    if order.len() > inst.p() {
        return Ok(None);
    }
    let mut w = inst.fixed.clone();
    for (v, &t) in order.into_iter().zip(&inst.free) {
        w.place(t, v)?;
    }
    Ok(if inst.accepts(&w)? { Some(w) } else { None })
}

/// Fixed placements already separate s from C, so only their timing can
/// fail. Branches on guarding a vertex of the fire path to the first
/// placement that lands on a burning vertex.
fn repair(inst: &SacsRInstance) -> Result<Option<Strategy>, FptError> {
    fn rec(inst: &SacsRInstance, cur: &Strategy, y: &VertexSet) -> Result<Option<Strategy>, FptError> {
        let out = play(&inst.graph, inst.source, cur, GameModel::NonSpreading)?;
        let Some(bad) = out.violation else {
            return Ok(Some(cur.clone()));
        };
        if bad.reason != InvalidReason::Burning {
            return Ok(None);
        }
        let path = out
            .fire_path(&inst.graph, bad.vertex)
            .ok_or_else(|| FptError::Internal("burning vertex without a fire path".into()))?;
        for (l, &u) in path.iter().enumerate().skip(1) {
            if y.contains(u) || inst.critical.contains(u) || cur.turn_of(u).is_some() {
                continue;
            }
            for &j in inst.free.range(..=l) {
                if cur.get(j).is_some() {
                    continue;
                }
                let mut next = cur.clone();
                next.place(j, u)?;
                if let Some(w) = rec(inst, &next, y)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
    rec(inst, &inst.fixed, &inst.fixed_set())
}

fn pow_sat(base: u128, exp: usize) -> u128 {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)).unwrap_or(u128::MAX)
}
