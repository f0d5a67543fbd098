//! Text formats: instances, strategies and witness reports.
//!
//! Instance grammar, one directive per line, `#` starts a comment:
//!
//! ```text
//! p sacs <n> <m>
//! e <u> <v>          (m lines, 0-based ids)
//! s <source>
//! c <id> <id> ...    (may repeat; ids accumulate)
//! k <budget>
//! model spreading    (optional; `model plain` is the default)
//! ```
//!
//! Strategy files hold lines `f <turn> <vertex>`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameError, GameModel, SacsInstance, Strategy};
use crate::graph::{Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("directive `{directive}`: {msg}")]
    Semantic { directive: &'static str, msg: String },
    #[error("malformed witness report: {0}")]
    Witness(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn semantic(directive: &'static str, msg: impl Into<String>) -> FormatError {
    FormatError::Semantic { directive, msg: msg.into() }
}

/// Parsed instance with its game model and the comment lines that preceded it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: SacsInstance,
    pub model: GameModel,
    pub comments: Vec<String>,
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number(line: usize, word: &str) -> Result<usize, FormatError> {
    word.parse().map_err(|_| syntax(line, format!("expected a non-negative integer, found `{word}`")))
}

fn arity(line: usize, words: &[&str], want: usize) -> Result<(), FormatError> {
    if words.len() != want {
        return Err(syntax(line, format!("`{}` takes {} argument(s), found {}", words[0], want - 1, words.len() - 1)));
    }
    Ok(())
}

/// Header and edge lines shared by instance and graph files.
struct GraphPart {
    n: usize,
    m: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl GraphPart {
    fn build(&self) -> Result<Graph, FormatError> {
        if self.edges.len() != self.m {
            return Err(semantic("e", format!("header announces {} edges, found {}", self.m, self.edges.len())));
        }
        Graph::from_edges(self.n, self.edges.iter().copied()).map_err(|e| semantic("e", e.to_string()))
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, FormatError> {
    let mut header: Option<GraphPart> = None;
    let mut source = None;
    let mut critical: Vec<Vertex> = Vec::new();
    let mut budget = None;
    let mut model = None;
    for (line, words) in directives(text) {
        if words[0] != "p" && header.is_none() {
            return Err(syntax(line, "the first directive must be `p sacs <n> <m>`"));
        }
        match words[0] {
            "p" => {
                arity(line, &words, 4)?;
                if header.is_some() {
                    return Err(syntax(line, "duplicate `p` line"));
                }
                if words[1] != "sacs" {
                    return Err(syntax(line, format!("unknown problem `{}`", words[1])));
                }
                header = Some(GraphPart { n: number(line, words[2])?, m: number(line, words[3])?, edges: Vec::new() });
            }
            "e" => {
                arity(line, &words, 3)?;
                let e = (number(line, words[1])?, number(line, words[2])?);
                header.as_mut().expect("checked above").edges.push(e);
            }
            "s" => {
                arity(line, &words, 2)?;
                if source.replace(number(line, words[1])?).is_some() {
                    return Err(syntax(line, "duplicate `s` line"));
                }
            }
            "c" => {
                for w in &words[1..] {
                    critical.push(number(line, w)?);
                }
            }
            "k" => {
                arity(line, &words, 2)?;
                if budget.replace(number(line, words[1])?).is_some() {
                    return Err(syntax(line, "duplicate `k` line"));
                }
            }
            "model" => {
                arity(line, &words, 2)?;
                let m = match words[1] {
                    "spreading" => GameModel::Spreading,
                    "plain" => GameModel::NonSpreading,
                    other => return Err(syntax(line, format!("unknown model `{other}`"))),
                };
                if model.replace(m).is_some() {
                    return Err(syntax(line, "duplicate `model` line"));
                }
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let header = header.ok_or_else(|| syntax(0, "missing `p sacs <n> <m>` line"))?;
    let graph = header.build()?;
    let n = graph.vertex_count();
    let source = source.ok_or_else(|| semantic("s", "missing source"))?;
    if source >= n {
        return Err(semantic("s", format!("source {source} is not a vertex of a {n}-vertex graph")));
    }
    if let Some(&c) = critical.iter().find(|&&c| c >= n) {
        return Err(semantic("c", format!("critical vertex {c} is not a vertex of a {n}-vertex graph")));
    }
    let set = VertexSet::from_iter(n, critical.iter().copied());
    if set.len() != critical.len() {
        return Err(semantic("c", "a critical vertex is listed twice"));
    }
    if set.contains(source) {
        return Err(semantic("c", format!("source {source} is listed as critical")));
    }
    let budget = budget.ok_or_else(|| semantic("k", "missing budget"))?;
    let instance = SacsInstance::new(graph, source, set, budget).map_err(|e| semantic("c", e.to_string()))?;
    let comments =
        text.lines().map(str::trim_start).filter_map(|l| l.strip_prefix('#')).map(|l| l.trim().to_string()).collect();
    Ok(InstanceFile { instance, model: model.unwrap_or_default(), comments })
}

/// Graph part of a file: a `p <kind> <n> <m>` header and `e` lines; other directives are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut header: Option<GraphPart> = None;
    for (line, words) in directives(text) {
        match words[0] {
            "p" => {
                arity(line, &words, 4)?;
                if header.is_some() {
                    return Err(syntax(line, "duplicate `p` line"));
                }
                header = Some(GraphPart { n: number(line, words[2])?, m: number(line, words[3])?, edges: Vec::new() });
            }
            "e" => {
                arity(line, &words, 3)?;
                let e = (number(line, words[1])?, number(line, words[2])?);
                header.as_mut().ok_or_else(|| syntax(line, "`e` before the `p` line"))?.edges.push(e);
            }
            _ => {}
        }
    }
    header.ok_or_else(|| syntax(0, "missing `p` line"))?.build()
}

/// Canonical text: comments first, edges with `u < v` in ascending order, critical ids ascending.
pub fn write_instance(inst: &SacsInstance, model: GameModel, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(&format!("p sacs {} {}\n", inst.vertex_count(), inst.graph.edge_count()));
    for (u, v) in inst.graph.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out.push_str(&format!("s {}\n", inst.source));
    let ids: Vec<String> = inst.critical.iter().map(|c| c.to_string()).collect();
    if ids.is_empty() {
        out.push_str("c\n");
    } else {
        out.push_str(&format!("c {}\n", ids.join(" ")));
    }
    out.push_str(&format!("k {}\n", inst.budget));
    if model == GameModel::Spreading {
        out.push_str("model spreading\n");
    }
    out
}

pub fn parse_strategy(text: &str) -> Result<Strategy, FormatError> {
    let mut s = Strategy::new();
    for (line, words) in directives(text) {
        if words[0] != "f" {
            return Err(syntax(line, format!("unknown directive `{}`", words[0])));
        }
        arity(line, &words, 3)?;
        let (turn, v) = (number(line, words[1])?, number(line, words[2])?);
        s.place(turn, v).map_err(|e| syntax(line, e.to_string()))?;
    }
    Ok(s)
}

pub fn write_strategy(s: &Strategy) -> String {
    s.iter().map(|(t, v)| format!("f {t} {v}\n")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub turn: usize,
    pub vertex: Vertex,
}

/// Machine-readable solver answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub answer: bool,
    pub strategy: Vec<Placement>,
    pub engine: String,
    pub elapsed_ms: f64,
}

impl WitnessReport {
    pub fn new(answer: bool, strategy: Option<&Strategy>, engine: &str, elapsed_ms: f64) -> Self {
        let strategy =
            strategy.map(|s| s.iter().map(|(turn, vertex)| Placement { turn, vertex }).collect()).unwrap_or_default();
        WitnessReport { answer, strategy, engine: engine.into(), elapsed_ms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Witness(e.to_string()))
    }

    pub fn to_strategy(&self) -> Result<Strategy, GameError> {
        Strategy::from_turns(self.strategy.iter().map(|p| (p.turn, p.vertex)))
    }
}

/// A strategy from either a strategy file or a witness report.
pub fn parse_strategy_or_witness(text: &str) -> Result<Strategy, FormatError> {
    if text.trim_start().starts_with('{') {
        let report = WitnessReport::from_json(text)?;
        report.to_strategy().map_err(|e| FormatError::Witness(e.to_string()))
    } else {
        parse_strategy(text)
    }
}

impl From<GraphError> for FormatError {
    fn from(e: GraphError) -> Self {
        semantic("e", e.to_string())
    }
}
