//! Raster to waypoint paths, then the optional filter, simplify and smooth
//! stages. Every stage that moves vertices avoids Obstacle cells.

mod export;
mod filter;
mod geom;
mod simplify;
mod smooth;
mod trace;

pub use export::{paths_to_svg, waypoints_json};
pub use filter::{filter_paths, path_encloses_obstacle, point_in_polygon};
pub use geom::{path_hits_obstacle, segment_hits_obstacle};
pub use simplify::{point_segment_distance, simplify_path};
pub use smooth::smooth_path;
pub use trace::trace_paths;

use rayon::prelude::*;
use serde::Serialize;

use crate::grid::Grid;
use crate::model::TileClass;

/// A vertex in cell units. Cell `(x, y)` has its centre at `(x + 0.5, y + 0.5)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
}

impl Waypoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn cell_center(x: usize, y: usize) -> Self {
        Self::new(x as f64 + 0.5, y as f64 + 0.5)
    }

    pub fn lerp(self, other: Waypoint, t: f64) -> Waypoint {
        Waypoint::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }

    pub fn distance(self, other: Waypoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Path {
    pub points: Vec<Waypoint>,
    pub closed: bool,
}

impl Path {
    pub fn open(points: Vec<Waypoint>) -> Self {
        Self { points, closed: false }
    }

    pub fn closed(points: Vec<Waypoint>) -> Self {
        Self { points, closed: true }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Segments in order, including the closing one for closed paths.
    pub fn segments(&self) -> impl Iterator<Item = (Waypoint, Waypoint)> + '_ {
        let n = self.points.len();
        let count = match (self.closed, n) {
            (_, 0 | 1) => 0,
            (true, _) => n,
            (false, _) => n - 1,
        };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Stage {
    Traced,
    Filtered { min_len: usize, require_enclosure: bool },
    Simplified { epsilon: f64 },
    Smoothed { iterations: u32 },
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Traced => "traced",
            Stage::Filtered { .. } => "filtered",
            Stage::Simplified { .. } => "simplified",
            Stage::Smoothed { .. } => "smoothed",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Stage::Traced => 0,
            Stage::Filtered { .. } => 1,
            Stage::Simplified { .. } => 2,
            Stage::Smoothed { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSet {
    pub paths: Vec<Path>,
    /// Stages applied so far, oldest first.
    pub stages: Vec<Stage>,
    /// Path cells with no Path neighbour, which yield no path.
    pub dropped_isolated: usize,
}

impl PathSet {
    pub fn stage(&self) -> Stage {
        *self.stages.last().unwrap_or(&Stage::Traced)
    }

    fn push_stage(&mut self, stage: Stage) {
        assert!(
            stage.rank() > self.stage().rank(),
            "stage {} applied after {}",
            stage.name(),
            self.stage().name()
        );
        self.stages.push(stage);
    }

    pub fn filter(mut self, min_len: usize, require_enclosure: bool, level: &Grid<TileClass>) -> Self {
        self.paths = filter_paths(self.paths, min_len, require_enclosure, level);
        self.push_stage(Stage::Filtered {
            min_len,
            require_enclosure,
        });
        self
    }

    pub fn simplify(mut self, epsilon: f64, level: &Grid<TileClass>) -> Self {
        self.paths = self.paths.par_iter().map(|p| simplify_path(p, epsilon, level)).collect();
        self.push_stage(Stage::Simplified { epsilon });
        self
    }

    pub fn smooth(mut self, iterations: u32, level: &Grid<TileClass>) -> Self {
        self.paths = self.paths.par_iter().map(|p| smooth_path(p, iterations, level)).collect();
        self.push_stage(Stage::Smoothed { iterations });
        self
    }

    /// True if no segment of any path touches an Obstacle cell.
    pub fn avoids_obstacles(&self, level: &Grid<TileClass>) -> bool {
        !self.paths.iter().any(|p| path_hits_obstacle(p, level))
    }
}

/// Post-processing switches. `None` skips a stage.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PostprocessOptions {
    pub min_path_len: usize,
    pub require_enclosure: bool,
    pub rdp_epsilon: Option<f64>,
    pub smooth_iterations: Option<u32>,
}

pub fn postprocess(raster: &Grid<TileClass>, opts: &PostprocessOptions) -> PathSet {
    let mut set = trace_paths(raster);
    if opts.min_path_len > 0 || opts.require_enclosure {
        set = set.filter(opts.min_path_len, opts.require_enclosure, raster);
    }
    if let Some(eps) = opts.rdp_epsilon {
        set = set.simplify(eps, raster);
    }
    if let Some(k) = opts.smooth_iterations {
        set = set.smooth(k, raster);
    }
    set
}
