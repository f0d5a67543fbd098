use std::collections::BTreeSet;

use super::{SeparatorError, SeparatorQuery};
use crate::graph::{Vertex, VertexSet};

/// True iff `s` is an inclusion-minimal separator that no other separator of
/// size at most `|s|` strictly covers.
///
/// Covering separators must contain `R(X, s)` plus one vertex of `s` on their
/// reach side, so it suffices to check λ(R(X, s) ∪ {v}, Y) > |s| for each v in s.
pub fn is_important(q: &SeparatorQuery<'_>, s: &VertexSet) -> bool {
    if !q.is_minimal_separator(s) {
        return false;
    }
    let reach = q.reach(s);
    s.iter().all(|v| {
        let mut grown = reach.clone();
        grown.insert(v);
        q.retarget(grown, q.y.clone()).lambda_at_most(s.len()).is_none()
    })
}

/// All important X-Y separators of size at most `q.bound`, ordered by size and
/// then by sorted vertex ids.
pub fn enumerate_important(q: &SeparatorQuery<'_>) -> Vec<VertexSet> {
    let mut found = BTreeSet::new();
    branch(q, q.x.clone(), VertexSet::new(q.vertex_count()), q.bound, &mut found);
    let mut out: Vec<VertexSet> = found
        .into_iter()
        .map(|ids: Vec<Vertex>| VertexSet::from_iter(q.vertex_count(), ids))
        .filter(|s| is_important(q, s))
        .collect();
    out.sort_by_key(|s| (s.len(), s.to_vec()));
    assert!(
        out.len() as u128 <= 4u128.saturating_pow(q.bound as u32),
        "{} important separators exceed the 4^{} bound",
        out.len(),
        q.bound
    );
    out
}

/// Branching on the minimum cut pushed toward Y: its smallest vertex either
/// joins the separator or is absorbed into the source side.
fn branch(q: &SeparatorQuery<'_>, x: VertexSet, chosen: VertexSet, budget: usize, found: &mut BTreeSet<Vec<Vertex>>) {
    let removed = q.removed.union(&chosen);
    let sub = SeparatorQuery { graph: q.graph, x, y: q.y.clone(), removed, bound: budget };
    let Some((lambda, cut)) = sub.furthest_min_cut(budget) else {
        return;
    };
    if lambda == 0 {
        found.insert(chosen.to_vec());
        return;
    }
    let pushed = sub.reach(&cut);
    let v = cut.first().expect("positive flow has a nonempty cut");

    let mut with_v = chosen.clone();
    with_v.insert(v);
    branch(q, pushed.clone(), with_v, budget - 1, found);

    let mut absorbed = pushed;
    absorbed.insert(v);
    branch(q, absorbed, chosen, budget, found);
}

/// The unique important separator of minimum size: the minimum cut closest to Y.
pub fn smallest_important(q: &SeparatorQuery<'_>) -> Result<VertexSet, SeparatorError> {
    match q.furthest_min_cut(q.bound) {
        Some((_, cut)) => Ok(cut),
        None => Err(SeparatorError::NoSeparator),
    }
}
