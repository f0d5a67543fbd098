//! Exact solvers for saving a critical vertex set from a spreading fire.
//!
//! The crate provides a deterministic game engine, vertex-separator tools
//! (minimum, important, and tight separator sequences), a parameterized
//! solver for general graphs, a tree solver, an exhaustive reference search,
//! a SAT-backed exact engine, and generators for reduction gadgets.

pub mod engine;
pub mod forge;
pub mod format;
pub mod fpt;
pub mod game;
pub mod graph;
pub mod oracle;
pub mod separators;
pub mod tree;

pub use game::{saves, simulate, validate_partial, GameError, GameModel, GameTrace, SacsInstance, Solution, Strategy};
pub use graph::{Graph, GraphBuilder, GraphError, Vertex, VertexSet};
