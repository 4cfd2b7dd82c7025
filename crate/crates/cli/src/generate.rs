//! `generate`: level + sketch in, raster, waypoints, overlay and manifest out.

use std::fs;
use std::path::Path;
use std::time::Instant;

use pathwfc::ingest::grid_to_image;
use pathwfc::postprocess::{paths_to_svg, postprocess, waypoints_json, Stage};
use pathwfc::solver::{render_snapshot, solve, FailureSite, Model, PatternCounts};
use pathwfc::{Grid, Rgb, RunStatus, SolverConfig};
use serde::Serialize;

use crate::config::JobConfig;
use crate::{read_level, read_sketch, CliError, EXIT_CONTRADICTION, EXIT_MAX_ATTEMPTS, EXIT_OK};

pub const RASTER_FILE: &str = "output.png";
pub const WAYPOINTS_FILE: &str = "waypoints.json";
pub const OVERLAY_FILE: &str = "overlay.svg";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SNAPSHOT_DIR: &str = "snapshots";

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Serialize)]
pub struct Failure {
    /// `preconstrain_contradiction` or `max_attempts_exceeded`.
    pub reason: &'static str,
    pub site: Option<FailureSite>,
}

#[derive(Debug, Serialize)]
pub struct PathSummary {
    pub count: usize,
    pub closed: usize,
    pub dropped_isolated: usize,
    pub stages: Vec<Stage>,
}

#[derive(Debug, Serialize)]
pub struct PostprocessInfo {
    pub min_path_len: usize,
    pub require_enclosure: bool,
    pub rdp_epsilon: Option<f64>,
    pub smooth_iterations: Option<u32>,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub model_build_s: f64,
    pub search_s: f64,
    pub postprocess_s: f64,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub status: RunStatus,
    pub exit_code: i32,
    pub failure: Option<Failure>,
    pub level: InputInfo,
    pub sketch: InputInfo,
    pub solver: SolverConfig,
    pub postprocess: PostprocessInfo,
    pub seed: u64,
    pub attempts_used: u32,
    pub steps: u64,
    pub failed_attempts: Vec<FailureSite>,
    pub pattern_counts: PatternCounts,
    pub warnings: Vec<String>,
    pub paths: Option<PathSummary>,
    pub artifacts: Vec<String>,
    pub timings: Timings,
}

pub struct Outcome {
    pub manifest: Manifest,
    pub exit_code: i32,
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn save_png(path: &Path, img: &image::RgbImage) -> Result<(), CliError> {
    img.save(path).map_err(|e| CliError::io(path, e))
}

fn rgb_image(grid: &Grid<Rgb>) -> image::RgbImage {
    image::RgbImage::from_fn(grid.width() as u32, grid.height() as u32, |x, y| {
        image::Rgb(grid.get(x as usize, y as usize).0)
    })
}

/// Runs one job and writes its artifacts into `job.out`. The manifest is
/// written for failed runs too.
pub fn generate(job: &JobConfig) -> Result<Outcome, CliError> {
    let level = read_level(&job.level)?;
    let sketch = read_sketch(&job.sketch, &job.palette, job.solver.n)?;
    fs::create_dir_all(&job.out).map_err(|e| CliError::io(&job.out, e))?;

    let t_build = Instant::now();
    let model = Model::build(&level, &sketch, &job.solver).map_err(|e| CliError::Config(e.to_string()))?;
    let model_build_s = t_build.elapsed().as_secs_f64();

    let mut snapshots: Vec<(u32, u64, Grid<Rgb>)> = Vec::new();
    let t_search = Instant::now();
    let result = solve(&model, &job.solver, |p| {
        let img = render_snapshot(p.wave, &p.model.set, &p.model.canvas, &job.palette);
        snapshots.push((p.attempt, p.step, img));
    });
    let search_s = t_search.elapsed().as_secs_f64();

    let mut artifacts = Vec::new();
    if !snapshots.is_empty() {
        let dir = job.out.join(SNAPSHOT_DIR);
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        for (attempt, step, img) in &snapshots {
            let name = format!("attempt{attempt:02}_step{step:06}.png");
            save_png(&dir.join(&name), &rgb_image(img))?;
            artifacts.push(format!("{SNAPSHOT_DIR}/{name}"));
        }
    }

    let (exit_code, failure) = match result.status {
        RunStatus::Solved => (EXIT_OK, None),
        RunStatus::Contradiction => (
            EXIT_CONTRADICTION,
            Some(Failure {
                reason: "preconstrain_contradiction",
                site: result.contradiction_site,
            }),
        ),
        RunStatus::MaxAttemptsExceeded => (
            EXIT_MAX_ATTEMPTS,
            Some(Failure {
                reason: "max_attempts_exceeded",
                site: result.contradiction_site,
            }),
        ),
    };

    let mut paths = None;
    let mut postprocess_s = 0.0;
    if let Some(raster) = &result.output {
        let t_post = Instant::now();
        let set = postprocess(raster, &job.post);
        postprocess_s = t_post.elapsed().as_secs_f64();
        save_png(&job.out.join(RASTER_FILE), &grid_to_image(raster, &job.palette))?;
        write(&job.out.join(WAYPOINTS_FILE), waypoints_json(&set))?;
        write(&job.out.join(OVERLAY_FILE), paths_to_svg(raster, &set, &job.palette, 8))?;
        artifacts.splice(
            0..0,
            [RASTER_FILE, WAYPOINTS_FILE, OVERLAY_FILE].map(String::from),
        );
        paths = Some(PathSummary {
            count: set.paths.len(),
            closed: set.paths.iter().filter(|p| p.closed).count(),
            dropped_isolated: set.dropped_isolated,
            stages: set.stages.clone(),
        });
    }
    artifacts.push(MANIFEST_FILE.to_string());

    let manifest = Manifest {
        status: result.status,
        exit_code,
        failure,
        level: InputInfo {
            path: job.level.display().to_string(),
            width: level.width(),
            height: level.height(),
        },
        sketch: InputInfo {
            path: job.sketch.display().to_string(),
            width: sketch.grid.width(),
            height: sketch.grid.height(),
        },
        solver: job.solver.clone(),
        postprocess: PostprocessInfo {
            min_path_len: job.post.min_path_len,
            require_enclosure: job.post.require_enclosure,
            rdp_epsilon: job.post.rdp_epsilon,
            smooth_iterations: job.post.smooth_iterations,
        },
        seed: result.seed,
        attempts_used: result.attempts_used,
        steps: result.steps,
        failed_attempts: result.failures.clone(),
        pattern_counts: result.pattern_counts,
        warnings: result.warnings.iter().map(|w| w.to_string()).collect(),
        paths,
        artifacts,
        timings: Timings {
            model_build_s,
            search_s,
            postprocess_s,
        },
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&job.out.join(MANIFEST_FILE), json + "\n")?;
    Ok(Outcome { manifest, exit_code })
}
