//! Exact decision through a SAT encoding, for instances too large for the
//! exhaustive search. Non-spreading model only.
//!
//! Variables: `x[v][j]` (a firefighter on v at turn j), `b[v][r]` (v may be
//! burning after fire round r) and `reach[v]` (v may burn eventually). Fire
//! variables are forced true wherever the fire certainly arrives, so any model
//! describes a strategy whose real fire is no larger than the encoded one.

use thiserror::Error;
use varisat::{ExtendFormula, Lit, Solver};

use crate::game::{outcome_saves, play, GameError, GameModel, SacsInstance, Solution, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("the SAT engine handles the non-spreading model only")]
    UnsupportedModel,
    #[error("SAT solver failure: {0}")]
    Solver(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Size of the generated formula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SatStats {
    pub variables: usize,
    pub clauses: usize,
}

pub fn sat_solve(inst: &SacsInstance, model: GameModel) -> Result<Solution, SatError> {
    sat_solve_report(inst, model).map(|r| r.0)
}

pub fn sat_solve_report(inst: &SacsInstance, model: GameModel) -> Result<(Solution, SatStats), SatError> {
    if model != GameModel::NonSpreading {
        return Err(SatError::UnsupportedModel);
    }
    let g = &inst.graph;
    let n = g.vertex_count();
    let k = inst.budget;
    let mut enc = Encoder { solver: Solver::new(), stats: SatStats::default() };

    let placeable: Vec<bool> = (0..n).map(|v| v != inst.source && !inst.critical.contains(v)).collect();
    // x[v][j - 1] for turn j.
    let x: Vec<Vec<Option<Lit>>> = (0..n).map(|v| (1..=k).map(|_| placeable[v].then(|| enc.lit())).collect()).collect();
    let b: Vec<Vec<Lit>> = (0..n).map(|_| (0..=k).map(|_| enc.lit()).collect()).collect();
    let reach: Vec<Lit> = (0..n).map(|_| enc.lit()).collect();

    enc.clause(&[b[inst.source][0]]);
    for turn in 0..k {
        let lits: Vec<Lit> = x.iter().filter_map(|row| row[turn]).collect();
        enc.at_most_one(&lits);
    }
    for v in 0..n {
        let lits: Vec<Lit> = x[v].iter().flatten().copied().collect();
        enc.at_most_one(&lits);
        for j in 1..=k {
            if let Some(xv) = x[v][j - 1] {
                // Placement at turn j needs v unburned after round j - 1.
                enc.clause(&[!xv, !b[v][j - 1]]);
            }
        }
        for r in 1..=k {
            enc.clause(&[b[v][r], !b[v][r - 1]]);
            let guarded: Vec<Lit> = x[v][..r].iter().flatten().copied().collect();
            for &u in g.adj(v) {
                let mut c = vec![b[v][r], !b[u][r - 1]];
                c.extend(&guarded);
                enc.clause(&c);
            }
        }
        enc.clause(&[reach[v], !b[v][k]]);
        let guarded: Vec<Lit> = x[v].iter().flatten().copied().collect();
        for &u in g.adj(v) {
            let mut c = vec![reach[v], !reach[u]];
            c.extend(&guarded);
            enc.clause(&c);
        }
    }
    for c in inst.critical.iter() {
        enc.clause(&[!reach[c]]);
    }

    let stats = enc.stats;
    let sat = enc.solver.solve().map_err(|e| SatError::Solver(e.to_string()))?;
    if !sat {
        return Ok((Solution::no(), stats));
    }
    let model_lits = enc.solver.model().ok_or_else(|| SatError::Solver("missing model".into()))?;
    let mut value = vec![false; stats.variables];
    for l in model_lits {
        if l.index() < value.len() {
            value[l.index()] = l.is_positive();
        }
    }
    let mut witness = Strategy::new();
    for (v, row) in x.iter().enumerate() {
        for (j, xv) in (1..=k).zip(row) {
            if xv.is_some_and(|l| value[l.index()]) {
                witness.place(j, v)?;
            }
        }
    }
    let out = play(g, inst.source, &witness, model).map_err(GameError::from)?;
    assert!(outcome_saves(inst, &witness, &out), "SAT model does not decode to a saving strategy");
    Ok((Solution::yes(witness), stats))
}

struct Encoder<'a> {
    solver: Solver<'a>,
    stats: SatStats,
}

impl Encoder<'_> {
    fn lit(&mut self) -> Lit {
        self.stats.variables += 1;
        self.solver.new_lit()
    }

    fn clause(&mut self, lits: &[Lit]) {
        self.stats.clauses += 1;
        self.solver.add_clause(lits);
    }

    fn at_most_one(&mut self, lits: &[Lit]) {
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                self.clause(&[!a, !b]);
            }
        }
    }
}
