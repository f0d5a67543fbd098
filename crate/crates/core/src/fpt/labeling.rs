use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::graph::Vertex;

/// Footprint of a strategy on one separator vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// A firefighter is placed on the vertex at this turn.
    Firefighter(usize),
    /// The vertex catches fire at this even time. The largest admissible
    /// value, `2K - 2` for horizon `K`, means "at that time or later".
    Burns(usize),
    /// The vertex never burns and carries no firefighter.
    Saved,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Firefighter(t) => write!(f, "f{t}"),
            Label::Burns(t) => write!(f, "b{t}"),
            Label::Saved => write!(f, "p"),
        }
    }
}

/// Necessary condition for two adjacent separator vertices to carry these
/// labels in the same strategy.
pub fn adjacent_compatible(a: Label, b: Label) -> bool {
    match (a, b) {
        (Label::Burns(x), Label::Burns(y)) => x.abs_diff(y) <= 2,
        (Label::Burns(_), Label::Saved) | (Label::Saved, Label::Burns(_)) => false,
        // A guarded vertex next to a fire at time t must be guarded by time t + 1.
        (Label::Burns(t), Label::Firefighter(j)) | (Label::Firefighter(j), Label::Burns(t)) => t + 2 >= 2 * j,
        _ => true,
    }
}

/// Labels a separator vertex at distance `dist` (in the graph minus the fixed
/// vertices) may carry, excluding firefighter labels, for horizon `horizon`.
pub fn passive_labels(dist: usize, horizon: usize) -> Vec<Label> {
    let late = 2 * horizon - 2;
    let first = (2 * dist).max(2).min(late);
    let mut out: Vec<Label> = (first..=late).step_by(2).map(Label::Burns).collect();
    out.push(Label::Saved);
    out
}

/// Split of the free turns: `a[i]` are turns placed on separator `S_i`
/// (`a[0]` is always empty) and `b[i]` turns placed in region `W_i`
/// for `1 <= i <= q + 1` (`b[0]` is unused).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimePartition {
    pub a: Vec<BTreeSet<usize>>,
    pub b: Vec<BTreeSet<usize>>,
}

impl TimePartition {
    pub fn q(&self) -> usize {
        self.a.len() - 1
    }

    /// True when all free turns sit in a single region.
    pub fn is_trivial(&self, p: usize) -> bool {
        p > 0 && self.b.iter().any(|s| s.len() == p)
    }
}

/// All `(2q + 1)^p` assignments of free turns to parts, in lexicographic order
/// of the part index per turn (`A_1..A_q` then `B_1..B_{q+1}`).
pub fn for_each_partition(free: &[usize], q: usize, mut visit: impl FnMut(TimePartition) -> bool) {
    let parts = 2 * q + 1;
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut tp = TimePartition { a: vec![BTreeSet::new(); q + 1], b: vec![BTreeSet::new(); q + 2] };
        for (&turn, &d) in free.iter().zip(&digits) {
            if d < q {
                tp.a[d + 1].insert(turn);
            } else {
                tp.b[d - q + 1].insert(turn);
            }
        }
        if visit(tp) {
            return;
        }
        // Increment, least significant digit last.
        let mut i = digits.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < parts {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Labels on separator vertices.
pub type Labeling = BTreeMap<Vertex, Label>;
