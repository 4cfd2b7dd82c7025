//! Command-line front end for `pathwfc`: the generate pipeline, the timing
//! benchmark and an inspection report.

pub mod bench;
pub mod config;
pub mod generate;
pub mod inspect;

use std::path::Path;

use pathwfc::ingest::{load_sketch, SketchImage};
use pathwfc::{parse_moving_ai_map, LevelMap, Palette};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONTRADICTION: i32 = 3;
pub const EXIT_MAX_ATTEMPTS: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or inputs that do not parse.
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

/// Reads a Moving AI map, naming it after the file stem.
pub fn read_level(path: &Path) -> Result<LevelMap, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_moving_ai_map(&name, &text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn read_sketch(path: &Path, palette: &Palette, n: usize) -> Result<SketchImage, CliError> {
    load_sketch(path, palette, n).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
