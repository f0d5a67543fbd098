//! Deterministic instance generators: reduction gadgets (clique, dominating
//! set, OR-composition of tree instances) and seeded random graphs and trees.
//!
//! "Path of length L" always means L edges through fresh internal vertices.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{GameError, GameModel, SacsInstance};
use crate::graph::{Graph, GraphBuilder, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl From<GraphError> for ForgeError {
    fn from(e: GraphError) -> Self {
        ForgeError::Game(e.into())
    }
}

/// Generator name, parameters and seed, written as comments into instance files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl Provenance {
    fn new(generator: &str) -> Self {
        Provenance { generator: generator.into(), params: Vec::new(), seed: None }
    }

    fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    /// One `key: value` line per entry, without comment markers.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("generator: {}", self.generator)];
        out.extend(self.params.iter().map(|(k, v)| format!("{k}: {v}")));
        if let Some(seed) = self.seed {
            out.push(format!("seed: {seed}"));
        }
        out
    }
}

/// A generated instance with its game model, provenance and named vertex groups.
#[derive(Debug, Clone)]
pub struct Forged {
    pub instance: SacsInstance,
    pub model: GameModel,
    pub provenance: Provenance,
    /// Named parts of the construction, ids ascending.
    pub groups: BTreeMap<String, Vec<Vertex>>,
}

/// Number of 2-element subsets.
pub fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Gadget whose answer should be yes iff `g` has a k-clique.
///
/// Edge nodes all touch the critical vertex t; layers `V_0..V_L` with
/// `L = m - C(k,2) - 1` are copies of V(g) joined by matchings; s reaches each
/// vertex of `V_0` by a path of length k; the last-layer copies of u and v
/// touch the edge node of uv. The budget is `k + m - C(k,2)`.
pub fn gen_clique_gadget(g: &Graph, k: usize) -> Result<Forged, ForgeError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if k < 2 {
        return Err(ForgeError::Parameter(format!("clique size {k} must be at least 2")));
    }
    if m < choose2(k) + 1 {
        return Err(ForgeError::Parameter(format!(
            "{m} edges leave no layers for k = {k}; need at least {}",
            choose2(k) + 1
        )));
    }
    let layers = m - choose2(k);
    let mut b = GraphBuilder::new();
    let s = b.add_vertex();
    let t = b.add_vertex();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let edge_nodes: Vec<Vertex> = edges.iter().map(|_| b.add_vertex()).collect();
    let layer: Vec<Vec<Vertex>> = (0..layers).map(|_| (0..n).map(|_| b.add_vertex()).collect()).collect();
    for &e in &edge_nodes {
        b.add_edge(e, t)?;
    }
    for w in layer.windows(2) {
        for (&a, &c) in w[0].iter().zip(&w[1]) {
            b.add_edge(a, c)?;
        }
    }
    let mut interiors = Vec::new();
    for &v in &layer[0] {
        interiors.extend(b.add_path(s, v, k)?);
    }
    let last = &layer[layers - 1];
    for (&(u, v), &e) in edges.iter().zip(&edge_nodes) {
        b.add_edge(last[u], e)?;
        b.add_edge(last[v], e)?;
    }
    let graph = b.build();
    let budget = k + layers;
    let instance = SacsInstance::from_parts(graph, s, &[t], budget)?;
    let mut groups = BTreeMap::new();
    groups.insert("source_paths".to_string(), sorted(interiors));
    groups.insert("edge_nodes".to_string(), edge_nodes);
    for (i, l) in layer.iter().enumerate() {
        groups.insert(format!("layer_{i}"), l.clone());
    }
    let provenance = Provenance::new("clique").param("n", n).param("m", m).param("k", k).param("budget", budget);
    Ok(Forged { instance, model: GameModel::NonSpreading, provenance, groups })
}

/// Gadget whose answer in the spreading model should be yes iff `g` has a
/// dominating set of size at most k.
///
/// Two copies `v1`, `v2` of each vertex; paths s to `v1` of length k; for
/// every edge uv and both orientations a path `u1` to `v2` of length k and a
/// path `u2` to `v1` of length 2k; a path `v1` to `v2` of length 2k per vertex.
/// The critical set is all of `V2` and the budget is k.
pub fn gen_domset_gadget(g: &Graph, k: usize) -> Result<Forged, ForgeError> {
    if k < 1 {
        return Err(ForgeError::Parameter("budget must be at least 1".into()));
    }
    let n = g.vertex_count();
    let mut b = GraphBuilder::new();
    let s = b.add_vertex();
    let first: Vec<Vertex> = (0..n).map(|_| b.add_vertex()).collect();
    let second: Vec<Vertex> = (0..n).map(|_| b.add_vertex()).collect();
    for &v in &first {
        b.add_path(s, v, k)?;
    }
    for (u, v) in g.edges() {
        for (a, c) in [(u, v), (v, u)] {
            b.add_path(first[a], second[c], k)?;
            b.add_path(second[a], first[c], 2 * k)?;
        }
    }
    for v in 0..n {
        b.add_path(first[v], second[v], 2 * k)?;
    }
    let instance = SacsInstance::from_parts(b.build(), s, &second, k)?;
    let mut groups = BTreeMap::new();
    groups.insert("first_copy".to_string(), first);
    groups.insert("second_copy".to_string(), second);
    let provenance = Provenance::new("domset").param("n", n).param("m", g.edge_count()).param("k", k);
    Ok(Forged { instance, model: GameModel::Spreading, provenance, groups })
}

/// Leaves of a tree rooted at `root`: vertices other than the root with at most one neighbor.
pub fn tree_leaves(g: &Graph, root: Vertex) -> VertexSet {
    VertexSet::from_iter(g.vertex_count(), g.vertices().filter(|&v| v != root && g.degree(v) <= 1))
}

/// OR-composition of tree instances with all-leaves critical sets and a
/// common budget k. Inputs are repeated cyclically up to `2^h` copies, hung
/// below the leaves of a full binary tree of height h, and the budget becomes
/// `k + h`.
pub fn gen_cross_composition(instances: &[SacsInstance]) -> Result<Forged, ForgeError> {
    let Some(first) = instances.first() else {
        return Err(ForgeError::Parameter("no input instances".into()));
    };
    let k = first.budget;
    for (i, inst) in instances.iter().enumerate() {
        if inst.budget != k {
            return Err(ForgeError::Parameter(format!("input {i} has budget {} but input 0 has {k}", inst.budget)));
        }
        if !inst.graph.is_tree() {
            return Err(ForgeError::Parameter(format!("input {i} is not a tree")));
        }
        if inst.critical != tree_leaves(&inst.graph, inst.source) {
            return Err(ForgeError::Parameter(format!("input {i} does not have all leaves critical")));
        }
    }
    let t = instances.len();
    let h = t.next_power_of_two().trailing_zeros() as usize;
    let copies = 1usize << h;

    let mut b = GraphBuilder::new();
    // Heap-ordered binary tree: node i has children 2i + 1 and 2i + 2.
    let internal = copies - 1;
    let tree: Vec<Vertex> = (0..internal).map(|_| b.add_vertex()).collect();
    let mut critical = Vec::new();
    let mut roots = Vec::new();
    for c in 0..copies {
        let inst = &instances[c % t];
        let offset = b.vertex_count();
        for _ in 0..inst.vertex_count() {
            b.add_vertex();
        }
        for (u, v) in inst.graph.edges() {
            b.add_edge(offset + u, offset + v)?;
        }
        critical.extend(inst.critical.iter().map(|v| offset + v));
        roots.push(offset + inst.source);
    }
    let node = |i: usize| if i < internal { tree[i] } else { roots[i - internal] };
    for (i, &parent) in tree.iter().enumerate() {
        b.add_edge(parent, node(2 * i + 1))?;
        b.add_edge(parent, node(2 * i + 2))?;
    }
    let source = node(0);
    let instance = SacsInstance::from_parts(b.build(), source, &critical, k + h)?;
    let mut groups = BTreeMap::new();
    groups.insert("roots".to_string(), roots);
    let provenance = Provenance::new("compose").param("inputs", t).param("height", h).param("k", k);
    Ok(Forged { instance, model: GameModel::NonSpreading, provenance, groups })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    Graph,
    Tree,
}

/// Parameters of a seeded random instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub kind: RandomKind,
    pub n: usize,
    /// Edge probability for graphs; ignored for trees.
    pub density: f64,
    /// Probability that a non-source vertex is critical.
    pub critical_rate: f64,
    pub budget_min: usize,
    pub budget_max: usize,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(kind: RandomKind, n: usize, seed: u64) -> Self {
        RandomSpec { kind, n, density: 0.3, critical_rate: 0.3, budget_min: 1, budget_max: 3, seed }
    }
}

/// Reproducible random instance with a uniform source and a nonempty critical set avoiding it.
pub fn gen_random(spec: &RandomSpec) -> Result<Forged, ForgeError> {
    let n = spec.n;
    if n < 2 {
        return Err(ForgeError::Parameter(format!("need at least 2 vertices, got {n}")));
    }
    if !(0.0..=1.0).contains(&spec.density) || !(0.0..=1.0).contains(&spec.critical_rate) {
        return Err(ForgeError::Parameter("probabilities must lie in [0, 1]".into()));
    }
    if spec.budget_min > spec.budget_max {
        return Err(ForgeError::Parameter("empty budget range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = match spec.kind {
        RandomKind::Graph => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(spec.density) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)?
        }
        RandomKind::Tree => {
            let mut perm: Vec<Vertex> = (0..n).collect();
            perm.shuffle(&mut rng);
            let edges = (1..n).map(|i| (perm[rng.gen_range(0..i)], perm[i]));
            Graph::from_edges(n, edges)?
        }
    };
    let source = rng.gen_range(0..n);
    let mut critical: Vec<Vertex> = (0..n).filter(|&v| v != source && rng.gen_bool(spec.critical_rate)).collect();
    if critical.is_empty() {
        let others: Vec<Vertex> = (0..n).filter(|&v| v != source).collect();
        critical.push(*others.choose(&mut rng).expect("n >= 2"));
    }
    let budget = rng.gen_range(spec.budget_min..=spec.budget_max);
    let instance = SacsInstance::from_parts(graph, source, &critical, budget)?;
    let kind = match spec.kind {
        RandomKind::Graph => "graph",
        RandomKind::Tree => "tree",
    };
    let mut provenance = Provenance::new("random").param("kind", kind).param("n", n);
    if spec.kind == RandomKind::Graph {
        provenance = provenance.param("density", spec.density);
    }
    provenance = provenance
        .param("critical_rate", spec.critical_rate)
        .param("budget_range", format!("{}..={}", spec.budget_min, spec.budget_max));
    provenance.seed = Some(spec.seed);
    Ok(Forged { instance, model: GameModel::NonSpreading, provenance, groups: BTreeMap::new() })
}

fn sorted(mut v: Vec<Vertex>) -> Vec<Vertex> {
    v.sort_unstable();
    v
}
