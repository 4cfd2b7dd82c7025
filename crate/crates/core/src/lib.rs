//! Path generation for game levels with a modified overlapping Wave Function
//! Collapse.
//!
//! A small colour sketch of a path design is cut into `n x n` patterns, a
//! Moving AI level fixes the obstacle layout, and the solver fills the rest
//! of the level so every window agrees with some pattern. The solved raster
//! is then traced into waypoint paths and optionally filtered, simplified and
//! smoothed.

pub mod grid;
pub mod ingest;
pub mod model;
pub mod patterns;
pub mod postprocess;
pub mod rng;
pub mod solver;

pub use grid::Grid;
pub use ingest::{parse_moving_ai_map, LevelMap, MapParseError, SketchImage};
pub use model::{Palette, Pattern, PatternCell, Rgb, SolverConfig, Symmetry, TileClass, WeightMode};
pub use patterns::PatternSet;
pub use solver::{run, RunResult, RunStatus};
