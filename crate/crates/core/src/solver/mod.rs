//! The modified overlapping WFC engine.
//!
//! A wave cell at `(x, y)` holds the pattern covering canvas cells
//! `[x, x + n) x [y, y + n)`, so a `W x H` canvas has a
//! `(W - n + 1) x (H - n + 1)` wave. The output is never periodic.

mod wave;

pub use wave::{Contradiction, Observation, Wave};

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::grid::Grid;
use crate::ingest::{level_to_output_canvas, LevelMap, SketchImage};
use crate::model::{
    ClassSet, ConfigError, Origin, Palette, PatternCell, Rgb, SolverConfig, TileClass, WeightMode,
};
use crate::patterns::{
    extract_patterns, synthesize_masks, validate_stretch_coverage, ExtractionOptions,
    PatternSet, PatternSetError, PatternWarning,
};
use crate::rng::{attempt_seed, solver_rng};

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Patterns(#[from] PatternSetError),
    #[error("level is {width}x{height}, smaller than the {n}x{n} pattern size")]
    LevelTooSmall {
        width: usize,
        height: usize,
        n: usize,
    },
}

/// Everything a run needs before search starts: the finished pattern set
/// (with compat tables), the canvas and the effective weights.
#[derive(Clone, Debug)]
pub struct Model {
    pub set: PatternSet,
    pub canvas: Grid<TileClass>,
    pub warnings: Vec<PatternWarning>,
    weights: Vec<f64>,
    /// Per-pattern accepted classes, present when the set holds masks.
    mask_cells: Option<Vec<Vec<ClassSet>>>,
}

impl Model {
    /// Extract patterns, add the obstacle interior, optionally add masks,
    /// then build the compat tables.
    pub fn build(
        level: &LevelMap,
        sketch: &SketchImage,
        cfg: &SolverConfig,
    ) -> Result<Self, SolverError> {
        cfg.validate()?;
        let n = cfg.n;
        if level.width() < n || level.height() < n {
            return Err(SolverError::LevelTooSmall {
                width: level.width(),
                height: level.height(),
                n,
            });
        }
        let opts = ExtractionOptions {
            n,
            symmetry: cfg.symmetry,
            periodic_input: cfg.periodic_input,
        };
        let canvas = level_to_output_canvas(level);
        let mut set = extract_patterns(sketch, &opts)?;
        let warnings = validate_stretch_coverage(&set);
        set.add_obstacle_interior()?;
        if cfg.masks_enabled {
            set.add_masks(synthesize_masks(&canvas, n).map_err(PatternSetError::from)?, cfg.mask_weight)?;
        }
        set.build_compat()?;
        Ok(Self::from_parts(set, canvas, cfg.weight_mode, warnings))
    }

    /// Wraps an already-built set. Panics if the compat tables are missing.
    pub fn from_parts(
        set: PatternSet,
        canvas: Grid<TileClass>,
        mode: WeightMode,
        warnings: Vec<PatternWarning>,
    ) -> Self {
        assert!(set.has_compat(), "compat tables must be built");
        let weights = match mode {
            WeightMode::Frequency => set.weights().to_vec(),
            WeightMode::Uniform => vec![1.0; set.len()],
        };
        let mask_cells = (set.count_origin(Origin::Mask) > 0).then(|| {
            set.patterns()
                .iter()
                .map(|p| p.cells().iter().map(|c| c.allowed()).collect())
                .collect()
        });
        Self {
            set,
            canvas,
            warnings,
            weights,
            mask_cells,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn wave_size(&self) -> (usize, usize) {
        let n = self.set.n();
        (self.canvas.width() - n + 1, self.canvas.height() - n + 1)
    }

    /// A wave with every pattern possible. With masks in the set it also
    /// carries the canvas class layer.
    pub fn fresh_wave(&self) -> Wave<'_> {
        let (w, h) = self.wave_size();
        let mut wave = Wave::new(w, h, self.set.compat(), &self.weights);
        if let Some(cells) = &self.mask_cells {
            wave.enable_class_layer(self.set.n(), cells);
        }
        wave
    }
}

/// Bitmasks over the `n*n` footprint of a pattern: which of its cells may sit
/// on an Obstacle canvas cell and which on a Free one.
fn placement_masks(set: &PatternSet) -> Vec<(u64, u64)> {
    set.patterns()
        .iter()
        .map(|p| {
            let mut on_obstacle = 0u64;
            let mut on_free = 0u64;
            for (i, &c) in p.cells().iter().enumerate() {
                if c.matches(TileClass::Obstacle) {
                    on_obstacle |= 1 << i;
                }
                if c.allowed().intersects(ClassSet::NON_OBSTACLE) {
                    on_free |= 1 << i;
                }
            }
            (on_obstacle, on_free)
        })
        .collect()
}

/// Bans every pattern whose footprint disagrees with the canvas, then
/// propagates. Canvas Obstacle cells accept pattern cells that match
/// Obstacle; canvas Free cells accept any cell that can be non-Obstacle.
pub fn preconstrain(
    wave: &mut Wave<'_>,
    canvas: &Grid<TileClass>,
    set: &PatternSet,
) -> Result<(), Contradiction> {
    let n = set.n();
    let full = if n * n == 64 { u64::MAX } else { (1u64 << (n * n)) - 1 };
    let masks = placement_masks(set);
    let mut allowed_by_footprint: HashMap<u64, Vec<bool>> = HashMap::new();
    for y in 0..wave.height() {
        for x in 0..wave.width() {
            let mut obstacles = 0u64;
            for dy in 0..n {
                for dx in 0..n {
                    if *canvas.get(x + dx, y + dy) == TileClass::Obstacle {
                        obstacles |= 1 << (dy * n + dx);
                    }
                }
            }
            let allowed = allowed_by_footprint.entry(obstacles).or_insert_with(|| {
                masks
                    .iter()
                    .map(|&(on_obs, on_free)| {
                        obstacles & !on_obs == 0 && (full & !obstacles) & !on_free == 0
                    })
                    .collect()
            });
            let cell = wave.cell_index(x, y);
            for (p, &ok) in allowed.iter().enumerate() {
                if !ok {
                    wave.ban(cell, p)?;
                }
            }
        }
    }
    if wave.has_class_layer() {
        for (x, y, &c) in canvas.enumerate() {
            let keep = if c == TileClass::Obstacle {
                TileClass::Obstacle.bit()
            } else {
                ClassSet::NON_OBSTACLE
            };
            wave.restrict_canvas(x, y, keep);
        }
    }
    wave.ban_unsupported()?;
    wave.propagate()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("wave cell ({x}, {y}) is not decided")]
    Undecided { x: usize, y: usize },
    #[error("covering patterns disagree at canvas cell ({x}, {y})")]
    Inconsistent { x: usize, y: usize },
}

/// Wave cells whose pattern covers canvas cell `(x, y)`, with the in-pattern offset.
fn covering(
    x: usize,
    y: usize,
    n: usize,
    wave_w: usize,
    wave_h: usize,
) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    let ys = y.saturating_sub(n - 1)..=y.min(wave_h - 1);
    ys.flat_map(move |ay| {
        let xs = x.saturating_sub(n - 1)..=x.min(wave_w - 1);
        xs.map(move |ax| (ax, ay, x - ax, y - ay))
    })
}

/// Assembles the output raster from a fully decided wave. Mask cells keep
/// the canvas class.
pub fn render_decided(
    wave: &Wave<'_>,
    set: &PatternSet,
    canvas: &Grid<TileClass>,
) -> Result<Grid<TileClass>, RenderError> {
    let n = set.n();
    let (ww, wh) = (wave.width(), wave.height());
    let mut decided = Vec::with_capacity(ww * wh);
    for cell in 0..ww * wh {
        let (x, y) = wave.cell_coords(cell);
        decided.push(wave.decided(cell).ok_or(RenderError::Undecided { x, y })?);
    }
    let mut out = canvas.clone();
    for y in 0..canvas.height() {
        for x in 0..canvas.width() {
            let mut value = None;
            let mut accepted = ClassSet::ALL;
            for (ax, ay, ox, oy) in covering(x, y, n, ww, wh) {
                let cell = set.pattern(decided[ay * ww + ax]).get(ox, oy);
                accepted = ClassSet(accepted.0 & cell.allowed().0);
                if let PatternCell::Concrete(c) = cell {
                    match value {
                        None => value = Some(c),
                        Some(v) if v != c => return Err(RenderError::Inconsistent { x, y }),
                        _ => {}
                    }
                }
            }
            let base = *canvas.get(x, y);
            let v = value.unwrap_or(base);
            let fits_canvas = (v == TileClass::Obstacle) == (base == TileClass::Obstacle);
            if !accepted.contains(v) || !fits_canvas {
                return Err(RenderError::Inconsistent { x, y });
            }
            out.set(x, y, v);
        }
    }
    Ok(out)
}

/// Pattern id per wave cell of a fully decided wave.
pub fn decided_patterns(wave: &Wave<'_>) -> Option<Grid<u32>> {
    let cells: Option<Vec<u32>> = (0..wave.cell_count())
        .map(|c| wave.decided(c).map(|p| p as u32))
        .collect();
    Grid::from_vec(wave.width(), wave.height(), cells?)
}

/// Progress image: each canvas cell gets the mean palette color over every
/// (wave cell, possible pattern) candidate covering it. Mask cells contribute
/// the canvas color. Channels are truncated toward zero.
pub fn render_snapshot(
    wave: &Wave<'_>,
    set: &PatternSet,
    canvas: &Grid<TileClass>,
    palette: &Palette,
) -> Grid<Rgb> {
    let n = set.n();
    let (ww, wh) = (wave.width(), wave.height());
    Grid::from_fn(canvas.width(), canvas.height(), |x, y| {
        let base = palette.color(*canvas.get(x, y));
        let mut sum = [0u64; 3];
        let mut count = 0u64;
        for (ax, ay, ox, oy) in covering(x, y, n, ww, wh) {
            for p in wave.possible_patterns(ay * ww + ax) {
                let color = match set.pattern(p).get(ox, oy) {
                    PatternCell::Concrete(c) => palette.color(c),
                    _ => base,
                };
                for k in 0..3 {
                    sum[k] += color.0[k] as u64;
                }
                count += 1;
            }
        }
        if count == 0 {
            base
        } else {
            Rgb([
                (sum[0] / count) as u8,
                (sum[1] / count) as u8,
                (sum[2] / count) as u8,
            ])
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Solved,
    /// Pre-constraining emptied a cell. This does not depend on the seed, so
    /// no restart is attempted.
    Contradiction,
    MaxAttemptsExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailurePhase {
    Preconstrain,
    Search,
    Render,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FailureSite {
    pub phase: FailurePhase,
    /// Wave cell (= top-left canvas cell of the pattern footprint).
    pub x: usize,
    pub y: usize,
    pub pattern: Option<usize>,
    pub depth: u32,
    pub attempt: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PatternCounts {
    pub input: usize,
    pub obstacle_interior: usize,
    pub mask: usize,
    pub total: usize,
}

impl PatternCounts {
    pub fn of(set: &PatternSet) -> Self {
        Self {
            input: set.count_origin(Origin::Input),
            obstacle_interior: set.count_origin(Origin::ObstacleInterior),
            mask: set.count_origin(Origin::Mask),
            total: set.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub status: RunStatus,
    pub output: Option<Grid<TileClass>>,
    /// Decided pattern id per wave cell, when solved.
    pub decided: Option<Grid<u32>>,
    pub attempts_used: u32,
    /// Observe steps of the last attempt.
    pub steps: u64,
    pub contradiction_site: Option<FailureSite>,
    pub failures: Vec<FailureSite>,
    pub pattern_counts: PatternCounts,
    pub warnings: Vec<PatternWarning>,
    pub seed: u64,
}

/// Handed to the progress callback every `snapshot_every` observe steps.
pub struct Progress<'m, 'w> {
    pub attempt: u32,
    pub step: u64,
    pub wave: &'w Wave<'m>,
    pub model: &'m Model,
}

pub fn run(level: &LevelMap, sketch: &SketchImage, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    let model = Model::build(level, sketch, cfg)?;
    Ok(solve(&model, cfg, |_| {}))
}

pub fn run_with_observer(
    level: &LevelMap,
    sketch: &SketchImage,
    cfg: &SolverConfig,
    observer: impl FnMut(&Progress<'_, '_>),
) -> Result<RunResult, SolverError> {
    let model = Model::build(level, sketch, cfg)?;
    Ok(solve(&model, cfg, observer))
}

/// Pre-constrains once, then runs observe/propagate attempts, restarting on
/// contradiction with `attempt_seed(cfg.seed, attempt)`.
pub fn solve(
    model: &Model,
    cfg: &SolverConfig,
    mut observer: impl FnMut(&Progress<'_, '_>),
) -> RunResult {
    let mut result = RunResult {
        status: RunStatus::MaxAttemptsExceeded,
        output: None,
        decided: None,
        attempts_used: 0,
        steps: 0,
        contradiction_site: None,
        failures: Vec::new(),
        pattern_counts: PatternCounts::of(&model.set),
        warnings: model.warnings.clone(),
        seed: cfg.seed,
    };

    let mut base = model.fresh_wave();
    if let Err(c) = preconstrain(&mut base, &model.canvas, &model.set) {
        let site = FailureSite {
            phase: FailurePhase::Preconstrain,
            x: c.x,
            y: c.y,
            pattern: Some(c.pattern),
            depth: c.depth,
            attempt: 0,
        };
        result.status = RunStatus::Contradiction;
        result.attempts_used = 1;
        result.contradiction_site = Some(site);
        result.failures.push(site);
        return result;
    }
    debug_assert!(base.supports_are_coherent());

    for attempt in 0..cfg.max_attempts {
        result.attempts_used = attempt + 1;
        let mut rng = solver_rng(attempt_seed(cfg.seed, attempt));
        let mut wave = base.clone();
        wave.reseed_noise(&mut rng, cfg.entropy_noise);
        let mut steps = 0u64;
        let failure = loop {
            match wave.observe(&mut rng) {
                Observation::AllDecided => break None,
                Observation::Collapsed { .. } => {
                    steps += 1;
                    if let Err(c) = wave.propagate() {
                        break Some(FailureSite {
                            phase: FailurePhase::Search,
                            x: c.x,
                            y: c.y,
                            pattern: Some(c.pattern),
                            depth: c.depth,
                            attempt,
                        });
                    }
                    if cfg.snapshot_every.is_some_and(|k| steps.is_multiple_of(k)) {
                        observer(&Progress {
                            attempt,
                            step: steps,
                            wave: &wave,
                            model,
                        });
                    }
                }
            }
        };
        result.steps = steps;
        let failure = match failure {
            Some(f) => f,
            None => match render_decided(&wave, &model.set, &model.canvas) {
                Ok(output) => {
                    debug_assert!(wave.supports_are_coherent());
                    result.status = RunStatus::Solved;
                    result.decided = decided_patterns(&wave);
                    result.output = Some(output);
                    result.contradiction_site = None;
                    return result;
                }
                Err(RenderError::Inconsistent { x, y }) | Err(RenderError::Undecided { x, y }) => {
                    FailureSite {
                        phase: FailurePhase::Render,
                        x,
                        y,
                        pattern: None,
                        depth: 0,
                        attempt,
                    }
                }
            },
        };
        result.contradiction_site = Some(failure);
        result.failures.push(failure);
    }
    result
}
