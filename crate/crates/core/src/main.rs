use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sacs::engine::{solve_with, Engine};
use sacs::forge::{
    gen_clique_gadget, gen_cross_composition, gen_domset_gadget, gen_random, tree_leaves, Forged, RandomKind,
    RandomSpec,
};
use sacs::format::{
    parse_graph, parse_instance, parse_strategy_or_witness, write_instance, InstanceFile, WitnessReport,
};
use sacs::game::{play, GameModel, GameTrace, SacsInstance};
use sacs::graph::{Graph, VertexSet};
use sacs::oracle::OracleConfig;
use sacs::separators::{enumerate_important, min_separator, tight_sequence, SeparatorError, SeparatorQuery};

const YES: u8 = 0;
const NO: u8 = 1;
const ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "sacs", version, about = "Save a critical vertex set from a spreading fire")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance. Exit status 0 = yes, 1 = no, 2 = error.
    Solve(SolveArgs),
    /// Replay a strategy (strategy file or witness JSON) and print the trace.
    Simulate(SimulateArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Print separators between the source and the critical set.
    Separators(SeparatorArgs),
    /// Solve many instance files, one result line each.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Fpt,
    Tree,
    Oracle,
    Sat,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Fpt => Engine::Fpt,
            EngineArg::Tree => Engine::Tree,
            EngineArg::Oracle => Engine::Oracle,
            EngineArg::Sat => Engine::Sat,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Plain,
    Spreading,
}

#[derive(Args)]
struct EngineOpts {
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    /// Overrides the model directive of the instance file.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Vertex cap of the exhaustive search.
    #[arg(long, default_value_t = 16)]
    oracle_max_vertices: usize,
    /// Budget cap of the exhaustive search.
    #[arg(long, default_value_t = 5)]
    oracle_max_budget: usize,
}

impl EngineOpts {
    fn model(&self, file: &InstanceFile) -> GameModel {
        match self.model {
            Some(ModelArg::Plain) => GameModel::NonSpreading,
            Some(ModelArg::Spreading) => GameModel::Spreading,
            None => file.model,
        }
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig::with_caps(self.oracle_max_vertices, self.oracle_max_budget)
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    opts: EngineOpts,
    /// Print the answer as a JSON witness report.
    #[arg(long)]
    witness: bool,
    /// Print the game trace of the witness.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct SimulateArgs {
    instance: PathBuf,
    strategy: PathBuf,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BaseGraph {
    /// Graph file (`p <kind> <n> <m>` plus `e u v` lines).
    #[arg(long, conflicts_with = "n")]
    graph: Option<PathBuf>,
    /// Vertex count of a random base graph when no file is given.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Clique gadget (yes iff the base graph has a k-clique).
    Clique {
        #[command(flatten)]
        base: BaseGraph,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Dominating-set gadget for the spreading model.
    Domset {
        #[command(flatten)]
        base: BaseGraph,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// OR-composition of tree instances with all leaves critical.
    Compose {
        /// Input instance files; if empty, `--count` random trees are used.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded random graph or tree instance.
    Random {
        #[arg(long, value_enum, default_value = "graph")]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        critical_rate: f64,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Graph,
    Tree,
}

#[derive(Args)]
struct SeparatorArgs {
    instance: PathBuf,
    /// All important separators, one per line.
    #[arg(long)]
    important: bool,
    /// The tight separator sequence, innermost first.
    #[arg(long)]
    tight: bool,
    /// Size bound; defaults to the instance budget.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct BatchArgs {
    instances: Vec<PathBuf>,
    #[command(flatten)]
    opts: EngineOpts,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Gen(g) => generate(g),
        Command::Separators(a) => separators(&a),
        Command::Batch(a) => batch(&a),
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(ERROR)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<InstanceFile, String> {
    parse_instance(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn solve(a: &SolveArgs) -> Result<u8, String> {
    let file = load(&a.instance)?;
    let model = a.opts.model(&file);
    let start = Instant::now();
    let (sol, used) =
        solve_with(&file.instance, model, a.opts.engine.into(), &a.opts.oracle()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    if a.witness {
        println!("{}", WitnessReport::new(sol.answer, sol.witness.as_ref(), used.name(), elapsed).to_json());
    } else {
        println!("{}", if sol.answer { "yes" } else { "no" });
    }
    if a.trace {
        if let Some(w) = &sol.witness {
            let out = play(&file.instance.graph, file.instance.source, w, model).map_err(|e| e.to_string())?;
            print!("{}", GameTrace::from_outcome(&out).to_log());
        }
    }
    Ok(if sol.answer { YES } else { NO })
}

fn simulate(a: &SimulateArgs) -> Result<u8, String> {
    let file = load(&a.instance)?;
    let model = match a.model {
        Some(ModelArg::Plain) => GameModel::NonSpreading,
        Some(ModelArg::Spreading) => GameModel::Spreading,
        None => file.model,
    };
    let strat = parse_strategy_or_witness(&read(&a.strategy)?).map_err(|e| format!("{}: {e}", a.strategy.display()))?;
    let inst = &file.instance;
    if strat.last_turn() > inst.budget {
        return Err(format!("strategy uses turn {} beyond the budget {}", strat.last_turn(), inst.budget));
    }
    let out = play(&inst.graph, inst.source, &strat, model).map_err(|e| e.to_string())?;
    if let Some(v) = out.violation {
        return Err(format!("invalid placement at turn {} on vertex {}: {:?}", v.turn, v.vertex, v.reason));
    }
    print!("{}", GameTrace::from_outcome(&out).to_log());
    let saved = inst.critical.iter().all(|c| out.burn_time[c].is_none())
        && strat.iter().all(|(_, v)| !inst.critical.contains(v));
    println!("saved={saved}");
    Ok(if saved { YES } else { NO })
}

fn base_graph(base: &BaseGraph) -> Result<(Graph, Vec<(String, String)>), String> {
    match (&base.graph, base.n) {
        (Some(path), _) => {
            let g = parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok((g, vec![("base".into(), path.display().to_string())]))
        }
        (None, Some(n)) => {
            let mut spec = RandomSpec::new(RandomKind::Graph, n.max(2), base.seed);
            spec.density = base.density;
            let g = gen_random(&spec).map_err(|e| e.to_string())?.instance.graph;
            let g = if n < 2 { Graph::empty(n) } else { g };
            let params = vec![
                ("base".into(), "random".into()),
                ("base_density".into(), base.density.to_string()),
                ("seed".into(), base.seed.to_string()),
            ];
            Ok((g, params))
        }
        (None, None) => Err("give a base graph with --graph FILE or --n N".into()),
    }
}

fn emit(forged: Forged, extra: Vec<(String, String)>, out: &Output) -> Result<u8, String> {
    let mut lines = forged.provenance.lines();
    lines.extend(extra.into_iter().map(|(k, v)| format!("{k}: {v}")));
    let text = write_instance(&forged.instance, forged.model, &lines);
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(YES)
}

fn generate(cmd: GenCommand) -> Result<u8, String> {
    match cmd {
        GenCommand::Clique { base, k, out } => {
            let (g, extra) = base_graph(&base)?;
            emit(gen_clique_gadget(&g, k).map_err(|e| e.to_string())?, extra, &out)
        }
        GenCommand::Domset { base, k, out } => {
            let (g, extra) = base_graph(&base)?;
            emit(gen_domset_gadget(&g, k).map_err(|e| e.to_string())?, extra, &out)
        }
        GenCommand::Compose { inputs, count, n, k, seed, out } => {
            let mut instances = Vec::new();
            let mut extra = Vec::new();
            if inputs.is_empty() {
                for i in 0..count as u64 {
                    let spec = RandomSpec::new(RandomKind::Tree, n, seed.wrapping_add(i));
                    let tree = gen_random(&spec).map_err(|e| e.to_string())?.instance;
                    let leaves = tree_leaves(&tree.graph, tree.source);
                    instances.push(SacsInstance::new(tree.graph, tree.source, leaves, k).map_err(|e| e.to_string())?);
                }
                extra.push(("tree_n".into(), n.to_string()));
                extra.push(("seed".into(), seed.to_string()));
            } else {
                for p in &inputs {
                    instances.push(load(p)?.instance);
                    extra.push(("input".into(), p.display().to_string()));
                }
            }
            emit(gen_cross_composition(&instances).map_err(|e| e.to_string())?, extra, &out)
        }
        GenCommand::Random { kind, n, density, critical_rate, k_min, k_max, seed, out } => {
            let kind = match kind {
                KindArg::Graph => RandomKind::Graph,
                KindArg::Tree => RandomKind::Tree,
            };
            let spec = RandomSpec { kind, n, density, critical_rate, budget_min: k_min, budget_max: k_max, seed };
            emit(gen_random(&spec).map_err(|e| e.to_string())?, Vec::new(), &out)
        }
    }
}

fn separators(a: &SeparatorArgs) -> Result<u8, String> {
    let file = load(&a.instance)?;
    let inst = &file.instance;
    let n = inst.vertex_count();
    let bound = a.k.unwrap_or(inst.budget);
    let q = SeparatorQuery::new(&inst.graph, VertexSet::singleton(n, inst.source), inst.critical.clone(), bound)
        .map_err(|e| e.to_string())?;
    let both = a.important && a.tight;
    if a.important {
        if both {
            println!("# important");
        }
        for s in enumerate_important(&q) {
            println!("{s}");
        }
    }
    if a.tight {
        if both {
            println!("# tight");
        }
        match tight_sequence(&q) {
            Ok(seq) => seq.separators.iter().for_each(|s| println!("{s}")),
            Err(SeparatorError::NoSeparator) => return no_separator(bound),
            Err(e) => return Err(e.to_string()),
        }
    }
    if !a.important && !a.tight {
        match min_separator(&q) {
            Ok(min) => println!("{}", min.witness),
            Err(SeparatorError::NoSeparator) => return no_separator(bound),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(YES)
}

fn no_separator(bound: usize) -> Result<u8, String> {
    eprintln!("no separator of size at most {bound}");
    Ok(NO)
}

fn batch(a: &BatchArgs) -> Result<u8, String> {
    let jobs = a.jobs.max(1);
    let engine: Engine = a.opts.engine.into();
    let oracle = a.opts.oracle();
    let run = |path: &PathBuf| -> String {
        let result = load(path).and_then(|file| {
            let model = a.opts.model(&file);
            let start = Instant::now();
            let (sol, used) = solve_with(&file.instance, model, engine, &oracle).map_err(|e| e.to_string())?;
            Ok(format!(
                "{} {} {:.3}",
                if sol.answer { "yes" } else { "no" },
                used,
                start.elapsed().as_secs_f64() * 1000.0
            ))
        });
        match result {
            Ok(line) => format!("{} {line}", path.display()),
            Err(e) => format!("{} error {e}", path.display()),
        }
    };
    let mut lines = vec![String::new(); a.instances.len()];
    let chunk = a.instances.len().div_ceil(jobs).max(1);
    std::thread::scope(|scope| {
        for (paths, slots) in a.instances.chunks(chunk).zip(lines.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (p, slot) in paths.iter().zip(slots) {
                    *slot = run(p);
                }
            });
        }
    });
    let mut failed = false;
    for l in &lines {
        failed |= l.split_whitespace().nth(1) == Some("error");
        println!("{l}");
    }
    Ok(if failed { ERROR } else { YES })
}
