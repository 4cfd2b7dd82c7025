//! Job configuration: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use pathwfc::model::{PaletteError, TileClass};
use pathwfc::postprocess::PostprocessOptions;
use pathwfc::{Palette, Rgb, SolverConfig, Symmetry, WeightMode};
use serde::Deserialize;

use crate::CliError;

/// Solver and post-processing flags shared by `generate` and `bench`.
#[derive(Args, Clone, Debug, Default)]
pub struct TuningArgs {
    /// Pattern side length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Add rotated and reflected patterns: none | all.
    #[arg(long)]
    pub symmetry: Option<Symmetry>,
    /// Pattern weighting: frequency | uniform.
    #[arg(long)]
    pub weights: Option<WeightMode>,
    /// Synthesize mask patterns from the level's obstacles.
    #[arg(long, overrides_with = "no_masks")]
    pub masks: bool,
    #[arg(long, overrides_with = "masks")]
    pub no_masks: bool,
    #[arg(long)]
    pub mask_weight: Option<f64>,
    /// Treat the sketch as wrapping around at its edges.
    #[arg(long)]
    pub periodic_input: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_attempts: Option<u32>,
    /// Drop paths with fewer waypoints than this.
    #[arg(long)]
    pub min_path_len: Option<usize>,
    /// Drop closed paths that enclose no obstacle.
    #[arg(long)]
    pub require_enclosure: bool,
    /// Simplify paths with this tolerance, in cells.
    #[arg(long)]
    pub rdp_epsilon: Option<f64>,
    /// Chaikin smoothing rounds.
    #[arg(long)]
    pub smooth_iters: Option<u32>,
    /// Write a progress image every this many observe steps.
    #[arg(long)]
    pub snapshot_every: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub n: Option<usize>,
    pub symmetry: Option<Symmetry>,
    #[serde(alias = "weight_mode")]
    pub weights: Option<WeightMode>,
    #[serde(alias = "masks_enabled")]
    pub masks: Option<bool>,
    pub mask_weight: Option<f64>,
    pub periodic_input: Option<bool>,
    pub seed: Option<u64>,
    pub max_attempts: Option<u32>,
    pub entropy_noise: Option<f64>,
    pub snapshot_every: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostSection {
    pub min_path_len: Option<usize>,
    pub require_enclosure: Option<bool>,
    pub rdp_epsilon: Option<f64>,
    pub smooth_iters: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaletteSection {
    pub free: Option<Rgb>,
    pub obstacle: Option<Rgb>,
    pub path: Option<Rgb>,
    pub stretch: Option<Rgb>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSection {
    pub name: Option<String>,
    pub level: PathBuf,
    pub sketch: PathBuf,
    #[serde(default)]
    pub solver: SolverSection,
}

/// The config file as written on disk.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub level: Option<PathBuf>,
    pub sketch: Option<PathBuf>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub postprocess: PostSection,
    #[serde(default)]
    pub palette: PaletteSection,
    /// Bench cases.
    #[serde(default, rename = "case")]
    pub cases: Vec<CaseSection>,
}

impl FileConfig {
    /// Reads a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        cfg.level.iter_mut().for_each(fix);
        cfg.sketch.iter_mut().for_each(fix);
        cfg.out.iter_mut().for_each(fix);
        for case in &mut cfg.cases {
            fix(&mut case.level);
            fix(&mut case.sketch);
        }
        Ok(cfg)
    }
}

/// A fully resolved generate job.
#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub level: PathBuf,
    pub sketch: PathBuf,
    pub out: PathBuf,
    pub solver: SolverConfig,
    pub post: PostprocessOptions,
    pub palette: Palette,
}

/// Layers `section` and then the flags over `base`.
pub fn solver_config(base: &SolverConfig, section: &SolverSection, flags: &TuningArgs) -> SolverConfig {
    let mut c = base.clone();
    let s = section;
    c.n = flags.n.or(s.n).unwrap_or(c.n);
    c.symmetry = flags.symmetry.or(s.symmetry).unwrap_or(c.symmetry);
    c.weight_mode = flags.weights.or(s.weights).unwrap_or(c.weight_mode);
    c.masks_enabled = if flags.masks {
        true
    } else if flags.no_masks {
        false
    } else {
        s.masks.unwrap_or(c.masks_enabled)
    };
    c.mask_weight = flags.mask_weight.or(s.mask_weight).unwrap_or(c.mask_weight);
    c.periodic_input = flags.periodic_input || s.periodic_input.unwrap_or(c.periodic_input);
    c.seed = flags.seed.or(s.seed).unwrap_or(c.seed);
    c.max_attempts = flags.max_attempts.or(s.max_attempts).unwrap_or(c.max_attempts);
    c.entropy_noise = s.entropy_noise.unwrap_or(c.entropy_noise);
    c.snapshot_every = flags.snapshot_every.or(s.snapshot_every).or(c.snapshot_every);
    c
}

pub fn post_options(section: &PostSection, flags: &TuningArgs) -> Result<PostprocessOptions, CliError> {
    let opts = PostprocessOptions {
        min_path_len: flags.min_path_len.or(section.min_path_len).unwrap_or(0),
        require_enclosure: flags.require_enclosure || section.require_enclosure.unwrap_or(false),
        rdp_epsilon: flags.rdp_epsilon.or(section.rdp_epsilon),
        smooth_iterations: flags.smooth_iters.or(section.smooth_iters),
    };
    if let Some(eps) = opts.rdp_epsilon {
        if !eps.is_finite() || eps < 0.0 {
            return Err(CliError::Config(format!("rdp_epsilon must be finite and >= 0, got {eps}")));
        }
    }
    if opts.smooth_iterations.is_some_and(|k| k > 8) {
        return Err(CliError::Config("smooth_iters must be at most 8".into()));
    }
    Ok(opts)
}

pub fn palette(section: &PaletteSection) -> Result<Palette, CliError> {
    let mut p = Palette::default();
    let overrides = [
        (TileClass::Free, section.free),
        (TileClass::Obstacle, section.obstacle),
        (TileClass::Path, section.path),
        (TileClass::Stretch, section.stretch),
    ];
    // Apply all overrides at once so swapping two colours is allowed.
    let mut colors = TileClass::ALL.map(|c| p.color(c));
    for (class, color) in overrides {
        if let Some(color) = color {
            colors[class.index()] = color;
        }
    }
    p = Palette::new(colors[0], colors[1], colors[2], colors[3])
        .map_err(|e: PaletteError| CliError::Config(e.to_string()))?;
    Ok(p)
}

/// Resolves a generate job from the optional file and the flags.
pub fn resolve_job(
    file: &FileConfig,
    level: Option<PathBuf>,
    sketch: Option<PathBuf>,
    out: Option<PathBuf>,
    flags: &TuningArgs,
) -> Result<JobConfig, CliError> {
    let missing = |what: &str| CliError::Config(format!("no {what} given (use --{what} or the config file)"));
    let level = level.or_else(|| file.level.clone()).ok_or_else(|| missing("level"))?;
    let sketch = sketch.or_else(|| file.sketch.clone()).ok_or_else(|| missing("sketch"))?;
    let out = out.or_else(|| file.out.clone()).ok_or_else(|| missing("out"))?;
    for p in [&level, &sketch] {
        if !p.is_file() {
            return Err(CliError::Config(format!("{} does not exist", p.display())));
        }
    }
    let solver = solver_config(&SolverConfig::default(), &file.solver, flags);
    solver.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(JobConfig {
        level,
        sketch,
        out,
        solver,
        post: post_options(&file.postprocess, flags)?,
        palette: palette(&file.palette)?,
    })
}
