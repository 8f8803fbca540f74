//! Exact solver, strategy simulator, and bound calculator for the
//! component-offer forcing game on graphs.

pub mod bitset;
pub mod bounds;
pub mod engine;
pub mod error;
pub mod families;
pub mod graph;
pub mod inertia;
pub mod policy;
pub mod protected;
pub mod simulate;
pub mod solver;
pub mod strategies;
pub mod trace;
pub mod transcript;
pub mod verify;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{GameState, Graph};
