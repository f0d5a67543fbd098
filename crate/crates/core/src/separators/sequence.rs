use super::important::enumerate_important;
use super::{SeparatorError, SeparatorQuery};
use crate::graph::VertexSet;

/// Nested reach sets `X = H_0 ⊆ H_1 ⊂ ... ⊂ H_q` with disjoint boundaries
/// `S_i = N(H_i)` of size at most `order`, all taken in `graph - removed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorSequence {
    /// `layers[i]` is `H_i`; `layers[0]` is X.
    pub layers: Vec<VertexSet>,
    /// `separators[i - 1]` is `S_i` for `i` in `1..=q`.
    pub separators: Vec<VertexSet>,
    pub order: usize,
}

impl SeparatorSequence {
    /// Number of separators `q`.
    pub fn len(&self) -> usize {
        self.separators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.separators.is_empty()
    }

    /// `S_i` for `1 <= i <= q`.
    pub fn separator(&self, i: usize) -> &VertexSet {
        &self.separators[i - 1]
    }

    /// Union of all separators.
    pub fn union(&self) -> VertexSet {
        let mut out = VertexSet::new(self.layers[0].universe());
        for s in &self.separators {
            out.union_with(s);
        }
        out
    }
}

/// Tight X-Y reachability sequence of order `q.bound`.
///
/// Picks the important separator of size at most the bound with the largest
/// reach (no separator within the bound covers it), recurses toward X on
/// `(X, S)`, and appends `R(X, S)`.
pub fn tight_sequence(q: &SeparatorQuery<'_>) -> Result<SeparatorSequence, SeparatorError> {
    if q.lambda_at_most(q.bound).is_none() {
        return Err(SeparatorError::NoSeparator);
    }
    let mut layers = vec![q.x.clone()];
    let mut separators = Vec::new();
    let mut target = q.y.clone();
    // Built from the Y side inward, then reversed.
    let mut stack = Vec::new();
    loop {
        let sub = q.retarget(q.x.clone(), target.clone());
        let candidates = enumerate_important(&sub);
        let Some(best) = candidates
            .into_iter()
            .map(|s| (sub.reach(&s), s))
            .max_by(|(ra, sa), (rb, sb)| ra.len().cmp(&rb.len()).then_with(|| sb.to_vec().cmp(&sa.to_vec())))
        else {
            break;
        };
        let (reach, sep) = best;
        if sep.is_empty() {
            // X is already cut off from the current target.
            break;
        }
        stack.push((reach, sep.clone()));
        target = sep;
    }
    while let Some((reach, sep)) = stack.pop() {
        layers.push(reach);
        separators.push(sep);
    }
    Ok(SeparatorSequence { layers, separators, order: q.bound })
}

/// Checks every structural property of a tight sequence, returning the first
/// failure. The "no small separator in a region" checks enumerate all vertex
/// subsets of size at most the order, so this is for small graphs only.
pub fn audit_sequence(q: &SeparatorQuery<'_>, seq: &SeparatorSequence) -> Result<(), String> {
    let g = q.graph;
    let n = g.vertex_count();
    let alive = q.removed.complement();
    let qlen = seq.len();
    if q.is_separator(&VertexSet::new(n)) {
        return if qlen == 0 { Ok(()) } else { Err("X is already separated but the sequence is nonempty".into()) };
    }
    if seq.layers.len() != qlen + 1 || seq.layers[0] != q.x {
        return Err("layer count or H_0 mismatch".into());
    }
    // Nesting and distance from Y. H_1 may equal X when S_1 = N(X).
    let y_closed = g.closed_set_neighbors(&q.y);
    for i in 0..qlen {
        let (a, b) = (&seq.layers[i], &seq.layers[i + 1]);
        if !a.is_subset(b) || (i > 0 && a == b) {
            return Err(format!("H_{i} is not a proper subset of H_{}", i + 1));
        }
    }
    if !seq.layers[qlen].is_disjoint(&y_closed) || !seq.layers[qlen].is_subset(&alive) {
        return Err("H_q meets N[Y] or removed vertices".into());
    }
    for i in 1..=qlen {
        let h = &seq.layers[i];
        let s = seq.separator(i);
        // Connectivity inside H_i.
        let inside = g.reach_unchecked(&q.x, &h.complement());
        if &inside != h {
            return Err(format!("H_{i} is not reachable from X within itself"));
        }
        // Boundary, minimality and size.
        if &g.set_neighbors(h).difference(&q.removed) != s {
            return Err(format!("S_{i} is not N(H_{i})"));
        }
        if s.len() > seq.order {
            return Err(format!("|S_{i}| exceeds the order"));
        }
        let beyond = q.removed.union(h);
        for v in s.iter() {
            let r = g.reach_unchecked(&VertexSet::singleton(n, v), &beyond);
            if r.is_disjoint(&q.y) {
                return Err(format!("vertex {v} of S_{i} cannot reach Y outside H_{i}"));
            }
        }
        if !q.is_minimal_separator(s) {
            return Err(format!("S_{i} is not a minimal separator"));
        }
        for j in 1..i {
            if !s.is_disjoint(seq.separator(j)) {
                return Err(format!("S_{j} and S_{i} intersect"));
            }
        }
    }
    // No small separator hidden inside a region.
    let terminals = q.x.union(&q.y).union(&q.removed);
    let mut regions = Vec::new();
    for i in 0..qlen {
        let closed = g.closed_set_neighbors(&seq.layers[i]);
        regions.push((format!("H_{} minus N[H_{i}]", i + 1), seq.layers[i + 1].difference(&closed)));
    }
    if qlen >= 1 {
        regions.push(("H_1".to_string(), seq.layers[1].difference(&terminals)));
    }
    let outer = g.closed_set_neighbors(&seq.layers[qlen]);
    regions.push(("outside N[H_q]".to_string(), alive.difference(&outer).difference(&terminals)));
    for (name, region) in regions {
        let region = region.difference(&terminals);
        if let Some(bad) = small_separator_within(q, &region, seq.order) {
            return Err(format!("separator {bad} of size <= {} lies inside {name}", seq.order));
        }
    }
    Ok(())
}

fn small_separator_within(q: &SeparatorQuery<'_>, region: &VertexSet, k: usize) -> Option<VertexSet> {
    let verts = region.to_vec();
    let n = q.vertex_count();
    let mut found = None;
    subsets_up_to(&verts, k, &mut |subset| {
        let s = VertexSet::from_iter(n, subset.iter().copied());
        if q.is_separator(&s) {
            found = Some(s);
            return true;
        }
        false
    });
    found
}

/// Calls `visit` on every subset of `items` with at most `k` elements until it returns true.
pub(crate) fn subsets_up_to(items: &[usize], k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        items: &[usize],
        start: usize,
        k: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if visit(cur) {
            return true;
        }
        if cur.len() == k {
            return false;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            if rec(items, i + 1, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(items, 0, k, &mut Vec::new(), visit)
}
