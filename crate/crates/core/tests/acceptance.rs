//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits nonzero on any FAIL.
#![allow(clippy::absurd_extreme_comparisons)]

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::seq::SliceRandom;
use rand::Rng;
use sacs::forge::{
    choose2, gen_clique_gadget, gen_cross_composition, gen_domset_gadget, gen_random, tree_leaves, RandomKind,
    RandomSpec,
};
use sacs::fpt::{solve_sacs_report, FptError};
use sacs::oracle::sat::sat_solve;
use sacs::oracle::{oracle_solve, oracle_solve_with, OracleConfig};
use sacs::separators::{enumerate_important, tight_sequence, SeparatorError, SeparatorQuery};
use sacs::tree::solve_tree;
use sacs::{simulate, GameModel, Graph, SacsInstance, Solution, Strategy, VertexSet};

const MAX_MISMATCHES: usize = 0;
const ORACLE_EQUIVALENCE_LIMIT: Duration = Duration::from_secs(600);
const REDUCTION_SUITE_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_GENERAL: usize = 500;
const RANDOM_TREES: usize = 500;
const SEPARATOR_GRAPHS: usize = 200;
/// Connected graph classes on 2..=6 vertices.
const CONNECTED_CLASSES: [usize; 5] = [1, 2, 6, 21, 112];
/// All graph classes on 1..=6 vertices.
const ALL_CLASSES: [usize; 6] = [1, 2, 4, 11, 34, 156];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

type Criterion = (usize, &'static str, fn() -> Verdict);

const CRITERIA: [Criterion; 8] = [
    (1, "fpt verdict equals exhaustive search", fpt_equals_oracle),
    (2, "tree verdict equals exhaustive search and fpt", tree_equals_oracle_and_fpt),
    (3, "every yes answer carries a saving witness", witnesses_are_sound),
    (4, "important separators match the definition, at most 4^k", important_separators),
    (5, "tight sequences pass the independent audit", tight_sequences),
    (6, "gadgets and composition preserve answers", reductions),
    (7, "structural invariants hold during search and play", structural_invariants),
    (8, "two protections at one depth burn two leaves", binary_tree_leaves),
];

fn main() -> ExitCode {
    let verdicts: Vec<Verdict> = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA.iter().map(|&(_, _, run)| scope.spawn(run)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|e| Verdict::new(false, format!("panicked: {}", panic_text(&e)))))
            .collect()
    });
    let mut failed = 0;
    for ((id, name, _), v) in CRITERIA.iter().zip(&verdicts) {
        println!("criterion {id} {}: {name} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
}

fn fpt_answer(inst: &SacsInstance) -> Result<bool, FptError> {
    solve_sacs_report(inst).map(|r| r.solution.answer)
}

fn oracle_answer(inst: &SacsInstance, model: GameModel) -> bool {
    oracle_solve(inst, model).expect("instance within oracle caps").answer
}

/// Random instance from the seeded generator with parameters drawn from `rng`.
fn random_instance(rng: &mut impl Rng, kind: RandomKind, n_max: usize, k_max: usize) -> SacsInstance {
    let spec = RandomSpec {
        kind,
        n: rng.gen_range(2..=n_max),
        density: rng.gen_range(0.15..0.6),
        critical_rate: rng.gen_range(0.1..0.5),
        budget_min: 0,
        budget_max: k_max,
        seed: rng.gen(),
    };
    gen_random(&spec).unwrap().instance
}

fn fpt_equals_oracle() -> Verdict {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut exhaustive = 0;
    for (n, &classes) in (2..=6).zip(&CONNECTED_CLASSES) {
        let graphs = nonisomorphic_graphs(n, true);
        if graphs.len() != classes {
            return Verdict::new(
                false,
                format!("enumerated {} connected classes on {n} vertices, want {classes}", graphs.len()),
            );
        }
        for g in &graphs {
            for s in 0..n {
                let others: Vec<usize> = (0..n).filter(|&v| v != s).collect();
                for c in nonempty_subsets(&others) {
                    for k in 1..=2 {
                        let inst = SacsInstance::from_parts(g.clone(), s, &c, k).unwrap();
                        exhaustive += 1;
                        if fpt_answer(&inst) != Ok(oracle_answer(&inst, GameModel::NonSpreading)) {
                            mismatches.push(format!("{:?} s={s} C={c:?} k={k}", g.edges().collect::<Vec<_>>()));
                        }
                    }
                }
            }
        }
    }
    let mut rng = rng(101);
    for _ in 0..RANDOM_GENERAL {
        let inst = random_instance(&mut rng, RandomKind::Graph, 8, 3);
        if fpt_answer(&inst) != Ok(oracle_answer(&inst, GameModel::NonSpreading)) {
            mismatches.push(format!("{inst:?}"));
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{exhaustive} exhaustive + {RANDOM_GENERAL} random instances, {} mismatches, {:.1}s of {}s{}",
        mismatches.len(),
        elapsed.as_secs_f64(),
        ORACLE_EQUIVALENCE_LIMIT.as_secs(),
        first(&mismatches)
    );
    Verdict::new(mismatches.len() <= MAX_MISMATCHES && elapsed <= ORACLE_EQUIVALENCE_LIMIT, detail)
}

fn first(items: &[String]) -> String {
    items.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

fn tree_equals_oracle_and_fpt() -> Verdict {
    let mut rng = rng(202);
    let mut mismatches = Vec::new();
    let mut yes = 0;
    for _ in 0..RANDOM_TREES {
        let inst = random_instance(&mut rng, RandomKind::Tree, 12, 3);
        let oracle = oracle_answer(&inst, GameModel::NonSpreading);
        let tree = solve_tree(&inst).map(|s| s.answer);
        let fpt = fpt_answer(&inst);
        yes += usize::from(oracle);
        if tree != Ok(oracle) || fpt != Ok(oracle) {
            mismatches.push(format!("{inst:?}: oracle {oracle} tree {tree:?} fpt {fpt:?}"));
        }
    }
    let detail = format!("{RANDOM_TREES} trees, {yes} yes, {} mismatches{}", mismatches.len(), first(&mismatches));
    Verdict::new(mismatches.len() <= MAX_MISMATCHES, detail)
}

fn witnesses_are_sound() -> Verdict {
    let mut rng = rng(303);
    let mut yes = [0usize; 5];
    let mut bad = Vec::new();
    let mut check = |engine: usize, name: &str, inst: &SacsInstance, sol: Solution, spreading: bool| match (
        sol.answer,
        &sol.witness,
    ) {
        (true, Some(w)) => {
            yes[engine] += 1;
            if !witness_saves(inst, w, spreading) {
                bad.push(format!("{name}: {inst:?} witness {w:?}"));
            }
        }
        (false, None) => {}
        _ => bad.push(format!("{name}: answer and witness disagree on {inst:?}")),
    };
    for _ in 0..300 {
        let inst = random_instance(&mut rng, RandomKind::Graph, 9, 3);
        check(0, "fpt", &inst, solve_sacs_report(&inst).unwrap().solution, false);
        check(1, "oracle", &inst, oracle_solve(&inst, GameModel::NonSpreading).unwrap(), false);
        check(2, "sat", &inst, sat_solve(&inst, GameModel::NonSpreading).unwrap(), false);
        let tree = random_instance(&mut rng, RandomKind::Tree, 12, 3);
        check(3, "tree", &tree, solve_tree(&tree).unwrap(), false);
        let small = random_instance(&mut rng, RandomKind::Graph, 8, 3);
        check(4, "oracle/spreading", &small, oracle_solve(&small, GameModel::Spreading).unwrap(), true);
    }
    let detail = format!(
        "yes witnesses fpt {} oracle {} sat {} tree {} spreading {}, {} invalid{}",
        yes[0],
        yes[1],
        yes[2],
        yes[3],
        yes[4],
        bad.len(),
        first(&bad)
    );
    Verdict::new(bad.is_empty() && yes.iter().all(|&c| c > 0), detail)
}

/// Random separator query with X = {0}. Trees use their leaves outside N[0]
/// as Y; other graphs one to three vertices outside N[0].
fn random_query(rng: &mut impl Rng, g: &Graph) -> (VertexSet, VertexSet, usize) {
    let n = g.vertex_count();
    let far: Vec<usize> = (1..n).filter(|&v| !g.has_edge(0, v)).collect();
    let pool = if far.is_empty() { vec![n - 1] } else { far };
    let leaves: Vec<usize> = pool.iter().copied().filter(|&v| g.degree(v) == 1).collect();
    if g.is_tree() && !leaves.is_empty() {
        return (set(n, &[0]), set(n, &leaves), rng.gen_range(1..=3));
    }
    let count = rng.gen_range(1..=3.min(pool.len()));
    let ys: Vec<usize> = pool.choose_multiple(rng, count).copied().collect();
    (set(n, &[0]), set(n, &ys), rng.gen_range(1..=3))
}

fn important_separators() -> Verdict {
    let mut rng = rng(404);
    let mut violations = Vec::new();
    let mut total = 0;
    let mut max_count = 0;
    for _ in 0..SEPARATOR_GRAPHS {
        let n = rng.gen_range(3..=10);
        let g = if rng.gen_bool(0.4) { random_tree(&mut rng, n) } else { random_sparse(&mut rng, n) };
        let (x, y, k) = random_query(&mut rng, &g);
        let q = SeparatorQuery::new(&g, x, y, k).unwrap();
        let got: Vec<Vec<usize>> = enumerate_important(&q).iter().map(|s| s.to_vec()).collect();
        total += got.len();
        max_count = max_count.max(got.len());
        if got.len() > 4usize.pow(k as u32) {
            violations.push(format!("{} separators exceed 4^{k} on {g:?}", got.len()));
        }
        let want = reference_important(&q);
        if got != want {
            violations.push(format!("{g:?} k={k}: got {got:?} want {want:?}"));
        }
    }
    let detail = format!(
        "{SEPARATOR_GRAPHS} graphs, {total} separators, max {max_count} per query, {} violations{}",
        violations.len(),
        first(&violations)
    );
    Verdict::new(violations.len() <= MAX_MISMATCHES, detail)
}

fn tight_sequences() -> Verdict {
    let mut rng = rng(505);
    let mut violations = Vec::new();
    let mut lengths = 0;
    let mut none = 0;
    for _ in 0..SEPARATOR_GRAPHS {
        let n = rng.gen_range(3..=10);
        let g = if rng.gen_bool(0.4) { random_tree(&mut rng, n) } else { random_sparse(&mut rng, n) };
        let (x, y, k) = random_query(&mut rng, &g);
        let q = SeparatorQuery::new(&g, x, y, k).unwrap();
        let free: Vec<usize> = (0..n).filter(|&v| !q.x.contains(v) && !q.y.contains(v)).collect();
        let separable = all_subsets_up_to(&free, k).iter().any(|s| {
            let mut blocked = vec![false; n];
            s.iter().for_each(|&v| blocked[v] = true);
            let r = reach(&g, &[0], &blocked);
            !(0..n).any(|v| r[v] && q.y.contains(v))
        });
        match tight_sequence(&q) {
            Ok(seq) => {
                lengths += seq.len();
                if !separable {
                    violations.push(format!("sequence returned without a separator of size <= {k} on {g:?}"));
                } else if let Err(e) = reference_audit(&q, &seq.layers, &seq.separators, seq.order) {
                    violations.push(format!("{e} on {g:?} k={k}"));
                }
            }
            Err(SeparatorError::NoSeparator) if !separable => none += 1,
            Err(e) => violations.push(format!("{e} on {g:?} k={k}")),
        }
    }
    let detail = format!(
        "{SEPARATOR_GRAPHS} graphs, {lengths} separators in total, {none} without a small separator, {} violations{}",
        violations.len(),
        first(&violations)
    );
    Verdict::new(violations.len() <= MAX_MISMATCHES, detail)
}

fn reductions() -> Verdict {
    let parts = [clique_gadget(), composition(), domset_gadget()];
    let pass = parts.iter().all(|p| p.pass);
    let detail =
        parts.iter().map(|p| format!("{} {}", if p.pass { "ok" } else { "FAILED" }, p.detail)).collect::<Vec<_>>();
    Verdict::new(pass, detail.join("; "))
}

fn clique_gadget() -> Verdict {
    const K: usize = 3;
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let (mut checked, mut skipped, mut false_yes) = (0, 0, 0);
    for (n, &classes) in (1..=6).zip(&ALL_CLASSES) {
        let graphs = nonisomorphic_graphs(n, false);
        if graphs.len() != classes {
            return Verdict::new(
                false,
                format!("clique: enumerated {} classes on {n} vertices, want {classes}", graphs.len()),
            );
        }
        for g in graphs {
            if g.edge_count() <= choose2(K) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let f = gen_clique_gadget(&g, K).unwrap();
            let got = sat_solve(&f.instance, f.model).unwrap().answer;
            if got != has_clique(&g, K) {
                false_yes += usize::from(got);
                mismatches.push(format!("{:?}: game {got}", g.edges().collect::<Vec<_>>()));
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "clique: {checked} graphs ({skipped} with at most {} edges rejected by the generator), {} mismatches ({false_yes} saved without a clique), {:.1}s{}",
        choose2(K),
        mismatches.len(),
        elapsed.as_secs_f64(),
        first(&mismatches)
    );
    Verdict::new(mismatches.len() <= MAX_MISMATCHES && elapsed <= REDUCTION_SUITE_LIMIT, detail)
}

/// Six tree instances with all leaves critical and budget 2: three yes, three no.
fn composition_corpus() -> Vec<(SacsInstance, bool)> {
    let mut rng = rng(606);
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    while yes.len() < 3 || no.len() < 3 {
        let n = rng.gen_range(4..=8);
        let g = random_tree(&mut rng, n);
        let leaves = tree_leaves(&g, 0);
        let inst = SacsInstance::new(g.clone(), 0, leaves.clone(), 2).unwrap();
        let answer = brute_force_saves(&g, 0, &leaves.to_vec(), 2, false);
        let bucket = if answer { &mut yes } else { &mut no };
        if bucket.len() < 3 {
            bucket.push((inst, answer));
        }
    }
    yes.into_iter().chain(no).collect()
}

fn composition() -> Verdict {
    let start = Instant::now();
    let corpus = composition_corpus();
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for (a, ya) in &corpus {
        for (b, yb) in &corpus {
            pairs += 1;
            let f = gen_cross_composition(&[a.clone(), b.clone()]).unwrap();
            let inst = &f.instance;
            let reference = brute_force_saves(&inst.graph, inst.source, &inst.critical.to_vec(), inst.budget, false);
            let tree = solve_tree(inst).map(|s| s.answer);
            if reference != (*ya || *yb) || tree != Ok(reference) {
                mismatches.push(format!("inputs {ya}/{yb}: composed {reference}, tree {tree:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "composition: {pairs} ordered pairs, {} mismatches, {:.1}s{}",
        mismatches.len(),
        elapsed.as_secs_f64(),
        first(&mismatches)
    );
    Verdict::new(mismatches.len() <= MAX_MISMATCHES && elapsed <= REDUCTION_SUITE_LIMIT, detail)
}

fn domset_gadget() -> Verdict {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (n, &classes) in (1..=5).zip(&ALL_CLASSES) {
        let graphs = nonisomorphic_graphs(n, false);
        if graphs.len() != classes {
            return Verdict::new(
                false,
                format!("domset: enumerated {} classes on {n} vertices, want {classes}", graphs.len()),
            );
        }
        for g in graphs {
            let gamma = domination_number(&g);
            for k in 1..=2 {
                checked += 1;
                let f = gen_domset_gadget(&g, k).unwrap();
                let caps = OracleConfig::with_caps(f.instance.vertex_count(), f.instance.budget);
                let got = oracle_solve_with(&f.instance, GameModel::Spreading, &caps).unwrap().answer;
                if got != (gamma <= k) {
                    mismatches.push(format!(
                        "{:?} k={k}: game {got}, domination number {gamma}",
                        g.edges().collect::<Vec<_>>()
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "domset: {checked} graph/budget pairs, {} mismatches, {:.1}s{}",
        mismatches.len(),
        elapsed.as_secs_f64(),
        first(&mismatches)
    );
    Verdict::new(mismatches.len() <= MAX_MISMATCHES && elapsed <= REDUCTION_SUITE_LIMIT, detail)
}

fn structural_invariants() -> Verdict {
    let mut rng = rng(707);
    let mut failures = Vec::new();
    let (mut runs, mut nodes, mut deepest, mut partitions, mut labelings, mut traces) = (0, 0, 0, 0, 0, 0);
    let mut check_trace = |inst: &SacsInstance, strat: &Strategy, model: GameModel, failures: &mut Vec<String>| {
        if let Ok(trace) = simulate(inst, strat, model) {
            traces += 1;
            if trace.snapshots.iter().any(|s| !s.burned.is_disjoint(&s.protected)) {
                failures.push(format!("burned and protected overlap for {strat:?} on {inst:?}"));
            }
        }
    };
    for i in 0..1000 {
        let inst = if i % 2 == 0 {
            random_instance(&mut rng, RandomKind::Graph, 12, 4)
        } else {
            random_instance(&mut rng, RandomKind::Tree, 12, 4)
        };
        runs += 1;
        match solve_sacs_report(&inst) {
            Ok(report) => {
                let st = &report.stats;
                nodes += st.nodes;
                deepest = deepest.max(st.max_depth);
                partitions += st.partitions;
                labelings += st.labelings;
                if st.max_depth > inst.budget {
                    failures.push(format!("depth {} exceeds k = {} on {inst:?}", st.max_depth, inst.budget));
                }
                if let Some(w) = &report.solution.witness {
                    check_trace(&inst, w, GameModel::NonSpreading, &mut failures);
                }
            }
            Err(e) => failures.push(format!("{e} on {inst:?}")),
        }
        let n = inst.vertex_count();
        let picks: Vec<usize> =
            (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, inst.budget.min(n)).copied().collect();
        let random = Strategy::from_turns(picks.into_iter().enumerate().map(|(i, v)| (i + 1, v))).unwrap();
        check_trace(&inst, &random, GameModel::NonSpreading, &mut failures);
        check_trace(&inst, &random, GameModel::Spreading, &mut failures);
    }
    let detail = format!(
        "{runs} solver runs, {nodes} nodes, max depth {deepest}, {partitions} partitions, {labelings} labelings, {traces} traces, {} failures{}",
        failures.len(),
        first(&failures)
    );
    Verdict::new(failures.is_empty(), detail)
}

fn binary_tree_leaves() -> Verdict {
    let mut counterexamples = Vec::new();
    let mut examined = 0;
    for h in 2..=3 {
        let g = complete_binary_tree(h);
        let n = g.vertex_count();
        let depth = |v: usize| (usize::BITS - (v + 1).leading_zeros() - 1) as usize;
        let leaves: Vec<usize> = (0..n).filter(|&v| depth(v) == h).collect();
        let options: Vec<Option<usize>> = std::iter::once(None).chain((1..n).map(Some)).collect();
        let mut idx = vec![0usize; h];
        loop {
            let turns: Vec<Option<usize>> = idx.iter().map(|&i| options[i]).collect();
            if let Some(burned) = play_reference(&g, 0, &turns, false) {
                let mut per_depth = vec![0; h + 1];
                turns.iter().flatten().for_each(|&v| per_depth[depth(v)] += 1);
                if per_depth.iter().any(|&c| c >= 2) {
                    examined += 1;
                    let burned_leaves = leaves.iter().filter(|&&l| burned[l]).count();
                    if burned_leaves < 2 {
                        counterexamples.push(format!("height {h}: {turns:?} burns {burned_leaves} leaves"));
                    }
                }
            }
            if !advance(&mut idx, options.len()) {
                break;
            }
        }
    }
    let detail = format!(
        "heights 2 and 3, {examined} strategies with two protections at one depth, {} counterexamples{}",
        counterexamples.len(),
        first(&counterexamples)
    );
    Verdict::new(counterexamples.is_empty(), detail)
}

/// Next index vector in lexicographic order; false after the last one.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < base {
            return true;
        }
        idx[i] = 0;
    }
    false
}
