//! Region decomposition along a tight separator sequence, child instances for
//! one region under a labeling, and merging of child strategies.

use super::labeling::{Label, Labeling, TimePartition};
use super::{FptError, SacsRInstance};
use crate::game::{play, GameModel, Strategy};
use crate::graph::{GraphBuilder, Vertex, VertexSet};
use crate::separators::{tight_sequence, SeparatorQuery, SeparatorSequence};

/// Split of `V - Y` into the source, separators `S_1..S_q`, regions
/// `W_1..W_{q+1}` and the critical set, where Y is the set of fixed vertices.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub sequence: SeparatorSequence,
    /// `boundaries[0]` is `{s}`, `boundaries[i]` is `S_i`.
    pub boundaries: Vec<VertexSet>,
    /// `regions[i]` is `W_i` for `1 <= i <= q + 1`; `regions[0]` is empty.
    pub regions: Vec<VertexSet>,
    /// Distances from s in `G - Y`.
    pub dist: Vec<Option<usize>>,
}

/// A child instance together with the map from its vertices back to the parent.
#[derive(Debug, Clone)]
pub struct Child {
    pub instance: SacsRInstance,
    /// `back[v]` is the parent vertex behind child vertex `v`; `None` for twins and gadget vertices.
    pub back: Vec<Option<Vertex>>,
    /// Child copies of every twinned separator vertex.
    pub copies: Vec<(Vertex, Vec<Vertex>)>,
}

impl Decomposition {
    /// Requires s and C to be connected in `G - Y` with λ at most the number of free turns.
    pub fn new(inst: &SacsRInstance) -> Result<Self, FptError> {
        let g = &inst.graph;
        let n = g.vertex_count();
        let y = inst.fixed_set();
        let source = VertexSet::singleton(n, inst.source);
        let query = SeparatorQuery::with_removed(g, source.clone(), inst.critical.clone(), y.clone(), inst.p())?;
        let sequence = tight_sequence(&query)?;
        let q = sequence.len();
        if q == 0 {
            return Err(FptError::Internal("decomposition of an already separated instance".into()));
        }
        let mut boundaries = vec![source.clone()];
        boundaries.extend(sequence.separators.iter().cloned());
        let mut regions = vec![VertexSet::new(n)];
        regions.push(sequence.layers[1].difference(&source));
        for i in 2..=q {
            let prev = sequence.layers[i - 1].union(&boundaries[i - 1]);
            regions.push(sequence.layers[i].difference(&prev));
        }
        let outer = y.union(&sequence.layers[q]).union(&boundaries[q]).union(&inst.critical);
        regions.push(outer.complement());
        let dist = g.bfs_distances(inst.source, &y)?;
        let dec = Decomposition { sequence, boundaries, regions, dist };
        dec.check_partition(inst)?;
        Ok(dec)
    }

    pub fn q(&self) -> usize {
        self.sequence.len()
    }

    /// Every vertex lies in exactly one part and regions only touch their own boundaries.
    fn check_partition(&self, inst: &SacsRInstance) -> Result<(), FptError> {
        let g = &inst.graph;
        let n = g.vertex_count();
        let y = inst.fixed_set();
        let mut parts: Vec<&VertexSet> = vec![&y, &inst.critical];
        parts.extend(self.boundaries.iter());
        parts.extend(self.regions.iter().skip(1));
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let mut all = VertexSet::new(n);
        for p in &parts {
            all.union_with(p);
        }
        if total != n || all.len() != n {
            return Err(FptError::Internal("regions do not partition the vertex set".into()));
        }
        let q = self.q();
        for i in 1..=q + 1 {
            let mut allowed = self.regions[i].union(&self.boundaries[i - 1]).union(&y);
            if i <= q {
                allowed.union_with(&self.boundaries[i]);
            } else {
                allowed.union_with(&inst.critical);
            }
            if !g.set_neighbors(&self.regions[i]).is_subset(&allowed) {
                return Err(FptError::Internal(format!("region {i} has an edge leaving its boundaries")));
            }
        }
        Ok(())
    }

    /// Distance of `v` from s in `G - Y`, `usize::MAX` when unreachable.
    pub fn distance(&self, v: Vertex) -> usize {
        self.dist[v].unwrap_or(usize::MAX)
    }

    /// Separator vertices seen by child `i`: `S_{i-1}` (not for `i = 1`) and `S_i` (not for `i = q + 1`).
    pub fn child_boundary(&self, i: usize) -> Vec<Vertex> {
        let mut out = Vec::new();
        if i >= 2 {
            out.extend(self.boundaries[i - 1].iter());
        }
        if i <= self.q() {
            out.extend(self.boundaries[i].iter());
        }
        out
    }

    /// Child instance for region `W_i` under the partition and labeling.
    ///
    /// Vertices labeled as burning or saved are replaced by `|B_i| + 1` twins.
    /// A twin of a vertex burning at time t gets its own path of length t/2
    /// from the child source and `|B_i| + 1` disjoint paths of length
    /// `K - t/2` to the anchor, so no twin can burn early without the anchor
    /// burning before its fixed turn, and the child cannot delay all twins.
    /// Twins of saved vertices touch a fresh critical vertex.
    pub fn build_child(
        &self,
        inst: &SacsRInstance,
        i: usize,
        tp: &TimePartition,
        lab: &Labeling,
    ) -> Result<Child, FptError> {
        let q = self.q();
        let g = &inst.graph;
        let n = g.vertex_count();
        let horizon = inst.horizon;
        let free = &tp.b[i];
        let width = free.len() + 1;
        let y = inst.fixed_set();

        let mut keep = self.regions[i].union(&y);
        if i == 1 {
            keep.insert(inst.source);
        }
        if i == q + 1 {
            keep.union_with(&inst.critical);
        }
        let mut twinned = Vec::new();
        for v in self.child_boundary(i) {
            match lab.get(&v) {
                Some(Label::Firefighter(_)) => {
                    keep.insert(v);
                }
                Some(&l) => twinned.push((v, l)),
                None => return Err(FptError::Internal(format!("separator vertex {v} is unlabeled"))),
            }
        }

        let mut b = GraphBuilder::new();
        let mut back = Vec::new();
        let mut ids: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for v in keep.iter() {
            ids[v].push(b.add_vertex());
            back.push(Some(v));
        }
        let mut copies = Vec::new();
        for &(v, _) in &twinned {
            for _ in 0..width {
                ids[v].push(fresh(&mut b, &mut back));
            }
            copies.push((v, ids[v].clone()));
        }
        for (u, v) in g.edges() {
            for &cu in &ids[u] {
                for &cv in &ids[v] {
                    b.add_edge(cu, cv)?;
                }
            }
        }
        let source = if i == 1 { ids[inst.source][0] } else { fresh(&mut b, &mut back) };
        let sentinel = fresh(&mut b, &mut back);
        let anchor = ids[inst.anchor][0];
        for (v, l) in &twinned {
            for &c in &ids[*v] {
                match *l {
                    Label::Burns(t) => {
                        connect(&mut b, &mut back, source, c, t / 2)?;
                        let rest = horizon - t / 2;
                        let lanes = if rest == 1 { 1 } else { width };
                        for _ in 0..lanes {
                            connect(&mut b, &mut back, c, anchor, rest)?;
                        }
                    }
                    Label::Saved => b.add_edge(c, sentinel)?,
                    Label::Firefighter(_) => unreachable!(),
                }
            }
        }
        let graph = b.build();
        let m = graph.vertex_count();

        let mut critical = VertexSet::singleton(m, sentinel);
        if i == q + 1 {
            for c in inst.critical.iter() {
                critical.insert(ids[c][0]);
            }
        }
        let mut fixed = inst.fixed.map_vertices(|v| Some(ids[v][0]))?;
        for v in self.child_boundary(i) {
            if let Some(&Label::Firefighter(j)) = lab.get(&v) {
                fixed.place(j, ids[v][0])?;
            }
        }
        let instance = SacsRInstance::new(graph, source, critical, horizon, anchor, free.iter().copied(), fixed)?;
        Ok(Child { instance, back, copies })
    }

    /// Combines the fixed placements, the separator firefighters and the child
    /// strategies restricted to their own turns, then replays the result.
    pub fn merge(&self, inst: &SacsRInstance, lab: &Labeling, children: &[Strategy]) -> Result<Strategy, FptError> {
        let mut out = inst.fixed.clone();
        for (&v, l) in lab {
            if let Label::Firefighter(j) = *l {
                out.place(j, v)?;
            }
        }
        for s in children {
            out = out.merged(s)?;
        }
        let played = play(&inst.graph, inst.source, &out, GameModel::NonSpreading)?;
        if let Some(v) = played.violation {
            return Err(FptError::Internal(format!("merged strategy is invalid at turn {}: {:?}", v.turn, v.reason)));
        }
        if inst.critical.iter().any(|c| played.burn_time[c].is_some()) {
            return Err(FptError::Internal("merged strategy lets a critical vertex burn".into()));
        }
        Ok(out)
    }

    /// Checks the timing the gadget is meant to force on a solved child: the
    /// earliest twin of a vertex labeled to burn at t burns exactly at t, and
    /// twins of saved vertices never burn.
    pub fn check_child_timing(&self, child: &Child, lab: &Labeling, witness: &Strategy) -> Result<(), FptError> {
        let c = &child.instance;
        let out = play(&c.graph, c.source, witness, GameModel::NonSpreading)?;
        for (v, twins) in &child.copies {
            let first = twins.iter().filter_map(|&x| out.burn_time[x]).min();
            let ok = match lab[v] {
                Label::Burns(t) => first == Some(t),
                Label::Saved => first.is_none(),
                Label::Firefighter(_) => true,
            };
            if !ok {
                return Err(FptError::Internal(format!("twins of {v} burn at {first:?} against label {}", lab[v])));
            }
        }
        Ok(())
    }
}

/// Path of `length` edges; a direct edge is added only once.
fn connect(
    b: &mut GraphBuilder,
    back: &mut Vec<Option<Vertex>>,
    from: Vertex,
    to: Vertex,
    length: usize,
) -> Result<(), FptError> {
    if length == 1 && b.has_edge(from, to) {
        return Ok(());
    }
    let internal = b.add_path(from, to, length)?;
    back.extend(internal.iter().map(|_| None));
    Ok(())
}

fn fresh(b: &mut GraphBuilder, back: &mut Vec<Option<Vertex>>) -> Vertex {
    back.push(None);
    b.add_vertex()
}
