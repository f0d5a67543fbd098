//! Independent brute-force references shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sacs::graph::{Graph, Vertex, VertexSet};
use sacs::separators::SeparatorQuery;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Reach of `x` avoiding `blocked`, by plain DFS over the adjacency lists.
pub fn reach(g: &Graph, x: &[Vertex], blocked: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack: Vec<Vertex> = x.to_vec();
    for &v in x {
        seen[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in g.adj(v) {
            if !seen[u] && !blocked[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

pub fn all_subsets_up_to(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    let mut out = vec![Vec::new()];
    for &v in items {
        let extra: Vec<Vec<Vertex>> = out
            .iter()
            .filter(|s| s.len() < k)
            .map(|s| {
                let mut t = s.clone();
                t.push(v);
                t
            })
            .collect();
        out.extend(extra);
    }
    out
}

/// Important separators straight from the definitions: minimal separators of
/// size <= k that no separator of size <= |S| strictly covers.
pub fn reference_important(q: &SeparatorQuery<'_>) -> Vec<Vec<Vertex>> {
    let g = q.graph;
    let n = g.vertex_count();
    let x = q.x.to_vec();
    let free: Vec<Vertex> =
        (0..n).filter(|&v| !q.x.contains(v) && !q.y.contains(v) && !q.removed.contains(v)).collect();
    let sep_reach = |s: &[Vertex]| -> Option<Vec<bool>> {
        let mut blocked: Vec<bool> = (0..n).map(|v| q.removed.contains(v)).collect();
        for &v in s {
            blocked[v] = true;
        }
        let r = reach(g, &x, &blocked);
        if (0..n).any(|v| r[v] && q.y.contains(v)) {
            None
        } else {
            Some(r)
        }
    };
    let seps: Vec<(Vec<Vertex>, Vec<bool>)> =
        all_subsets_up_to(&free, q.bound).into_iter().filter_map(|s| sep_reach(&s).map(|r| (s, r))).collect();
    let is_sep = |s: &[Vertex]| seps.iter().any(|(t, _)| t == s);
    let mut out: Vec<Vec<Vertex>> = seps
        .iter()
        .filter(|(s, _)| {
            (0..s.len()).all(|i| {
                let mut t = s.clone();
                t.remove(i);
                !is_sep(&t)
            })
        })
        .filter(|(s, r)| !seps.iter().any(|(t, rt)| t.len() <= s.len() && rt != r && (0..n).all(|v| !r[v] || rt[v])))
        .map(|(s, _)| s.clone())
        .collect();
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

pub fn set(n: usize, ids: &[Vertex]) -> VertexSet {
    VertexSet::from_iter(n, ids.iter().copied())
}

/// Random tree where vertex `i` hangs off a uniformly chosen earlier vertex.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (rng.gen_range(0..i), i))).unwrap()
}

/// Tree or sparse random graph, half and half, with a few chords on trees.
pub fn random_sparse(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    if rng.gen_bool(0.5) {
        let p = rng.gen_range(0.15..0.45);
        return random_graph(rng, n, p);
    }
    let t = random_tree(rng, n);
    let mut edges: Vec<(Vertex, Vertex)> = t.edges().collect();
    for _ in 0..rng.gen_range(0..3) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && !edges.contains(&(u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Plays a firefighter sequence (`None` = skip) with a standalone simulator.
/// Returns `None` if a placement is illegal, else the final burned flags.
pub fn play_reference(g: &Graph, s: Vertex, turns: &[Option<Vertex>], spreading: bool) -> Option<Vec<bool>> {
    let n = g.vertex_count();
    let mut burned = vec![false; n];
    let mut guarded = vec![false; n];
    burned[s] = true;
    let mut fresh_guards: Vec<Vertex> = Vec::new();
    let mut step = 0;
    loop {
        step += 1;
        if let Some(&Some(v)) = turns.get(step - 1) {
            if burned[v] || guarded[v] {
                return None;
            }
            guarded[v] = true;
            fresh_guards.push(v);
        }
        let mut next_guards = Vec::new();
        if spreading {
            for &p in &fresh_guards {
                for &u in g.adj(p) {
                    if !burned[u] && !guarded[u] {
                        guarded[u] = true;
                        next_guards.push(u);
                    }
                }
            }
        }
        fresh_guards = next_guards;
        let lit: Vec<Vertex> =
            (0..n).filter(|&u| !burned[u] && !guarded[u] && g.adj(u).iter().any(|&w| burned[w])).collect();
        for &u in &lit {
            burned[u] = true;
        }
        if step >= turns.len() && lit.is_empty() && fresh_guards.is_empty() {
            return Some(burned);
        }
    }
}

/// Tries every sequence of at most `k` turns, each a vertex or a skip.
/// Placements on critical vertices never count as saving.
pub fn brute_force_saves(g: &Graph, s: Vertex, critical: &[Vertex], k: usize, spreading: bool) -> bool {
    let n = g.vertex_count();
    let options: Vec<Option<Vertex>> =
        std::iter::once(None).chain((0..n).filter(|v| *v != s && !critical.contains(v)).map(Some)).collect();
    let mut idx = vec![0usize; k];
    loop {
        let turns: Vec<Option<Vertex>> = idx.iter().map(|&i| options[i]).collect();
        if let Some(burned) = play_reference(g, s, &turns, spreading) {
            if critical.iter().all(|&c| !burned[c]) {
                return true;
            }
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < options.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// chosen as the smallest edge bitmask over all relabelings.
pub fn nonisomorphic_graphs(n: usize, connected_only: bool) -> Vec<Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: Vertex, v: Vertex| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms.iter().map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect()).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canonical = maps.iter().all(|m| {
            let image = (0..pairs.len()).filter(|&e| mask >> e & 1 == 1).fold(0u32, |acc, e| acc | 1 << m[e]);
            image >= mask
        });
        if !canonical {
            continue;
        }
        let edges: Vec<(Vertex, Vertex)> = (0..pairs.len()).filter(|&e| mask >> e & 1 == 1).map(|e| pairs[e]).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        if !connected_only || reach(&g, &[0], &vec![false; n]).iter().all(|&r| r) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn nonempty_subsets(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    (1u32..1 << items.len())
        .map(|m| (0..items.len()).filter(|&i| m >> i & 1 == 1).map(|i| items[i]).collect())
        .collect()
}

pub fn has_clique(g: &Graph, k: usize) -> bool {
    let n = g.vertex_count();
    all_subsets_up_to(&(0..n).collect::<Vec<_>>(), k)
        .iter()
        .any(|s| s.len() == k && s.iter().all(|&u| s.iter().all(|&v| u == v || g.has_edge(u, v))))
}

pub fn domination_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0..=n)
        .find(|&k| {
            all_subsets_up_to(&(0..n).collect::<Vec<_>>(), k)
                .iter()
                .any(|d| (0..n).all(|v| d.contains(&v) || g.adj(v).iter().any(|u| d.contains(u))))
        })
        .unwrap()
}

/// Heap-ordered complete binary tree: children of `i` are `2i + 1`, `2i + 2`.
pub fn complete_binary_tree(height: usize) -> Graph {
    let n = (1 << (height + 1)) - 1;
    Graph::from_edges(n, (1..n).map(|v| ((v - 1) / 2, v))).unwrap()
}

/// Turn-indexed placements of a strategy, padded with skips to `k` turns.
/// `None` if the strategy uses a turn beyond `k`.
pub fn turns_of(strategy: &sacs::Strategy, k: usize) -> Option<Vec<Option<Vertex>>> {
    if strategy.last_turn() > k {
        return None;
    }
    Some((1..=k).map(|t| strategy.get(t)).collect())
}

/// Checks a witness with the standalone simulator: legal, within budget,
/// no placement on C, and no critical vertex burns.
pub fn witness_saves(inst: &sacs::SacsInstance, strategy: &sacs::Strategy, spreading: bool) -> bool {
    let Some(turns) = turns_of(strategy, inst.budget) else { return false };
    if turns.iter().flatten().any(|&v| inst.critical.contains(v)) {
        return false;
    }
    match play_reference(&inst.graph, inst.source, &turns, spreading) {
        Some(burned) => inst.critical.iter().all(|c| !burned[c]),
        None => false,
    }
}

fn flags(n: usize, s: &VertexSet) -> Vec<bool> {
    (0..n).map(|v| s.contains(v)).collect()
}

fn separates(q: &SeparatorQuery<'_>, s: &[Vertex]) -> bool {
    let n = q.graph.vertex_count();
    let mut blocked = flags(n, &q.removed);
    for &v in s {
        blocked[v] = true;
    }
    let r = reach(q.graph, &q.x.to_vec(), &blocked);
    !(0..n).any(|v| r[v] && q.y.contains(v))
}

fn neighbors_of(g: &Graph, h: &[bool]) -> Vec<bool> {
    let n = g.vertex_count();
    (0..n).map(|v| !h[v] && g.adj(v).iter().any(|&u| h[u])).collect()
}

/// Checks a tight separator sequence against its defining invariants using
/// only DFS and subset enumeration.
pub fn reference_audit(
    q: &SeparatorQuery<'_>,
    layers: &[VertexSet],
    seps: &[VertexSet],
    order: usize,
) -> Result<(), String> {
    let g = q.graph;
    let n = g.vertex_count();
    let removed = flags(n, &q.removed);
    let is_terminal = |v: Vertex| q.x.contains(v) || q.y.contains(v) || removed[v];
    let qlen = seps.len();
    if separates(q, &[]) {
        return if qlen == 0 { Ok(()) } else { Err("X already separated but sequence nonempty".into()) };
    }
    if layers.len() != qlen + 1 || layers[0] != q.x {
        return Err("H_0 must be X and there must be q + 1 layers".into());
    }
    let h: Vec<Vec<bool>> = layers.iter().map(|l| flags(n, l)).collect();
    // Nesting, strict after H_1.
    for i in 0..qlen {
        let sub = (0..n).all(|v| !h[i][v] || h[i + 1][v]);
        if !sub || (i > 0 && h[i] == h[i + 1]) {
            return Err(format!("H_{i} not nested in H_{}", i + 1));
        }
    }
    // H_q avoids N[Y] and the removed vertices.
    let y = flags(n, &q.y);
    let ny = neighbors_of(g, &y);
    if (0..n).any(|v| h[qlen][v] && (y[v] || ny[v] || removed[v])) {
        return Err("H_q meets N[Y]".into());
    }
    for i in 1..=qlen {
        let s = flags(n, &seps[i - 1]);
        let expect: Vec<bool> = neighbors_of(g, &h[i]).iter().zip(&removed).map(|(&a, &r)| a && !r).collect();
        if s != expect {
            return Err(format!("S_{i} != N(H_{i})"));
        }
        let outside: Vec<bool> = (0..n).map(|v| !h[i][v]).collect();
        if reach(g, &q.x.to_vec(), &outside) != h[i] {
            return Err(format!("H_{i} not connected to X inside itself"));
        }
        let mut blocked = h[i].clone();
        for v in 0..n {
            blocked[v] |= removed[v];
        }
        for v in seps[i - 1].iter() {
            let r = reach(g, &[v], &blocked);
            if !(0..n).any(|u| r[u] && y[u]) {
                return Err(format!("{v} in S_{i} does not reach Y outside H_{i}"));
            }
        }
        if seps[i - 1].len() > order {
            return Err(format!("|S_{i}| > {order}"));
        }
        for j in 1..i {
            if !seps[i - 1].is_disjoint(&seps[j - 1]) {
                return Err(format!("S_{j} meets S_{i}"));
            }
        }
    }
    // No small separator wholly inside a region.
    let mut regions: Vec<(String, Vec<Vertex>)> = Vec::new();
    for i in 0..qlen {
        let nh = neighbors_of(g, &h[i]);
        regions
            .push((format!("H_{} - N[H_{i}]", i + 1), (0..n).filter(|&v| h[i + 1][v] && !h[i][v] && !nh[v]).collect()));
    }
    if qlen >= 1 {
        regions.push(("H_1".into(), (0..n).filter(|&v| h[1][v]).collect()));
    }
    let nq = neighbors_of(g, &h[qlen]);
    regions.push(("outside N[H_q]".into(), (0..n).filter(|&v| !h[qlen][v] && !nq[v]).collect()));
    for (name, region) in regions {
        let region: Vec<Vertex> = region.into_iter().filter(|&v| !is_terminal(v)).collect();
        if let Some(s) = all_subsets_up_to(&region, order).into_iter().find(|s| separates(q, s)) {
            return Err(format!("separator {s:?} inside {name}"));
        }
    }
    Ok(())
}
