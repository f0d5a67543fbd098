//! Engine selection shared by the command line and the test suites.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fpt::{solve_sacs, FptError};
use crate::game::{saves, GameError, GameModel, SacsInstance, Solution};
use crate::oracle::sat::{sat_solve, SatError};
use crate::oracle::{oracle_solve_with, OracleConfig, OracleError};
use crate::tree::{solve_tree, TreeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Tree solver on trees, parameterized solver otherwise; exhaustive search in the spreading model.
    Auto,
    Fpt,
    Tree,
    Oracle,
    Sat,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Fpt => "fpt",
            Engine::Tree => "tree",
            Engine::Oracle => "oracle",
            Engine::Sat => "sat",
        }
    }

    /// The concrete engine `Auto` stands for on this instance.
    pub fn resolve(self, inst: &SacsInstance, model: GameModel) -> Engine {
        match self {
            Engine::Auto if model == GameModel::Spreading => Engine::Oracle,
            Engine::Auto if inst.graph.is_tree() => Engine::Tree,
            Engine::Auto => Engine::Fpt,
            other => other,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Engine::Auto),
            "fpt" => Ok(Engine::Fpt),
            "tree" => Ok(Engine::Tree),
            "oracle" => Ok(Engine::Oracle),
            "sat" => Ok(Engine::Sat),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("engine `{0}` does not support the spreading model")]
    UnsupportedModel(Engine),
    #[error(transparent)]
    Fpt(#[from] FptError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("engine `{0}` returned a witness that does not save the critical set")]
    BadWitness(Engine),
}

/// Solves with the requested engine and replays any witness through the game engine.
/// Returns the solution and the engine that actually ran.
pub fn solve_with(
    inst: &SacsInstance,
    model: GameModel,
    engine: Engine,
    oracle: &OracleConfig,
) -> Result<(Solution, Engine), EngineError> {
    let used = engine.resolve(inst, model);
    if model == GameModel::Spreading && matches!(used, Engine::Fpt | Engine::Tree | Engine::Sat) {
        return Err(EngineError::UnsupportedModel(used));
    }
    let sol = match used {
        Engine::Fpt => solve_sacs(inst)?,
        Engine::Tree => solve_tree(inst)?,
        Engine::Oracle => oracle_solve_with(inst, model, oracle)?,
        Engine::Sat => sat_solve(inst, model)?,
        Engine::Auto => unreachable!("resolved above"),
    };
    if let Some(w) = &sol.witness {
        if !saves(inst, w, model)? {
            return Err(EngineError::BadWitness(used));
        }
    }
    Ok((sol, used))
}
