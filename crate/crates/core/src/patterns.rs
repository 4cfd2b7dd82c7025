//! Pattern inventory: extraction from the sketch, symmetry expansion, mask
//! synthesis from the output level, and the cardinal compatibility tables the
//! propagator runs on.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::grid::Grid;
use crate::ingest::SketchImage;
use crate::model::{
    Direction, Origin, Pattern, PatternCell, PatternError, Symmetry, TileClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractionOptions {
    pub n: usize,
    pub symmetry: Symmetry,
    pub periodic_input: bool,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        Self {
            n: 3,
            symmetry: Symmetry::None,
            periodic_input: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternSetError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("sketch is {width}x{height}, smaller than the {n}x{n} pattern size")]
    SketchTooSmall {
        width: usize,
        height: usize,
        n: usize,
    },
    #[error("pattern of side {found} added to a set of side {expected}")]
    SideMismatch { expected: usize, found: usize },
    #[error("pattern set is empty")]
    Empty,
    #[error("{0} patterns exceed the supported maximum of {MAX_PATTERNS}")]
    TooMany(usize),
}

/// Support counters are 16 bits wide.
pub const MAX_PATTERNS: usize = u16::MAX as usize;

/// Per-pattern, per-direction lists of patterns allowed at the neighboring
/// wave cell in that direction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Compat {
    table: Vec<[Vec<u32>; 4]>,
}

impl Compat {
    pub fn from_table(table: Vec<[Vec<u32>; 4]>) -> Self {
        Self { table }
    }

    #[inline]
    pub fn allowed(&self, pattern: usize, dir: Direction) -> &[u32] {
        &self.table[pattern][dir.index()]
    }

    pub fn pattern_count(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Checks `q in allowed(p, d)` iff `p in allowed(q, -d)`.
    pub fn is_offset_symmetric(&self) -> bool {
        let n = self.table.len();
        let mut rel = vec![false; n * n * 4];
        for p in 0..n {
            for d in Direction::ALL {
                for &q in self.allowed(p, d) {
                    rel[(p * n + q as usize) * 4 + d.index()] = true;
                }
            }
        }
        (0..n).all(|p| {
            (0..n).all(|q| {
                Direction::ALL.into_iter().all(|d| {
                    rel[(p * n + q) * 4 + d.index()] == rel[(q * n + p) * 4 + d.opposite().index()]
                })
            })
        })
    }
}

/// The pattern inventory of one run.
#[derive(Clone, Debug, Default)]
pub struct PatternSet {
    n: usize,
    patterns: Vec<Pattern>,
    weights: Vec<f64>,
    origins: Vec<Origin>,
    index: HashMap<Pattern, usize>,
    compat: Compat,
}

impl PatternSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Default::default()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn pattern(&self, id: usize) -> &Pattern {
        &self.patterns[id]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    pub fn compat(&self) -> &Compat {
        &self.compat
    }

    pub fn has_compat(&self) -> bool {
        !self.compat.is_empty() && self.compat.pattern_count() == self.patterns.len()
    }

    pub fn id_of(&self, pattern: &Pattern) -> Option<usize> {
        self.index.get(pattern).copied()
    }

    pub fn count_origin(&self, origin: Origin) -> usize {
        self.origins.iter().filter(|&&o| o == origin).count()
    }

    /// Adds a pattern or merges it with an identical one already present.
    /// Input occurrences accumulate weight; other origins never override an
    /// existing entry. Adding invalidates any compat table.
    pub fn add(
        &mut self,
        pattern: Pattern,
        weight: f64,
        origin: Origin,
    ) -> Result<usize, PatternSetError> {
        if pattern.n() != self.n {
            return Err(PatternSetError::SideMismatch {
                expected: self.n,
                found: pattern.n(),
            });
        }
        self.compat = Compat::default();
        if let Some(&id) = self.index.get(&pattern) {
            if origin == Origin::Input && self.origins[id] == Origin::Input {
                self.weights[id] += weight;
            }
            return Ok(id);
        }
        if self.patterns.len() >= MAX_PATTERNS {
            return Err(PatternSetError::TooMany(self.patterns.len() + 1));
        }
        let id = self.patterns.len();
        self.index.insert(pattern.clone(), id);
        self.patterns.push(pattern);
        self.weights.push(weight);
        self.origins.push(origin);
        Ok(id)
    }

    /// Adds the all-Obstacle pattern once.
    pub fn add_obstacle_interior(&mut self) -> Result<usize, PatternSetError> {
        let p = make_obstacle_interior_pattern(self.n)?;
        self.add(p, 1.0, Origin::ObstacleInterior)
    }

    pub fn add_masks(
        &mut self,
        masks: Vec<Pattern>,
        weight: f64,
    ) -> Result<(), PatternSetError> {
        for m in masks {
            self.add(m, weight, Origin::Mask)?;
        }
        Ok(())
    }

    /// Computes the cardinal compatibility tables.
    pub fn build_compat(&mut self) -> Result<(), PatternSetError> {
        if self.patterns.is_empty() {
            return Err(PatternSetError::Empty);
        }
        let patterns = &self.patterns;
        let table = patterns
            .par_iter()
            .map(|p| {
                Direction::ALL.map(|d| {
                    patterns
                        .iter()
                        .enumerate()
                        .filter(|(_, q)| overlap_agrees(p, q, d))
                        .map(|(i, _)| i as u32)
                        .collect()
                })
            })
            .collect();
        self.compat = Compat::from_table(table);
        Ok(())
    }
}

/// Overlap rule, extended to masks: two cells agree when some concrete class
/// satisfies both.
#[inline]
pub fn cells_compatible(a: PatternCell, b: PatternCell) -> bool {
    a.allowed().intersects(b.allowed())
}

/// Whether `q`, placed one wave cell away from `p` in direction `d`, agrees
/// with `p` on their whole overlap.
pub fn overlap_agrees(p: &Pattern, q: &Pattern, d: Direction) -> bool {
    let n = p.n() as i64;
    let (dx, dy) = d.offset();
    let (x0, x1) = (dx.max(0), n + dx.min(0));
    let (y0, y1) = (dy.max(0), n + dy.min(0));
    for y in y0..y1 {
        for x in x0..x1 {
            let a = p.get(x as usize, y as usize);
            let b = q.get((x - dx) as usize, (y - dy) as usize);
            if !cells_compatible(a, b) {
                return false;
            }
        }
    }
    true
}

/// Enumerates every `n x n` window of the sketch (wrapping if periodic).
/// With symmetry on, each window contributes all 8 dihedral variants.
/// Weights are total occurrence counts.
pub fn extract_patterns(
    sketch: &SketchImage,
    opts: &ExtractionOptions,
) -> Result<PatternSet, PatternSetError> {
    let grid = &sketch.grid;
    let n = opts.n;
    let (w, h) = (grid.width(), grid.height());
    if w < n || h < n {
        return Err(PatternSetError::SketchTooSmall {
            width: w,
            height: h,
            n,
        });
    }
    let (ax, ay) = if opts.periodic_input {
        (w, h)
    } else {
        (w - n + 1, h - n + 1)
    };
    let mut set = PatternSet::new(n);
    for y in 0..ay {
        for x in 0..ax {
            let window = Pattern::from_window(grid, x, y, n, opts.periodic_input)?;
            match opts.symmetry {
                Symmetry::None => {
                    set.add(window, 1.0, Origin::Input)?;
                }
                Symmetry::RotationsAndReflections => {
                    for t in 0..8 {
                        set.add(window.transform(t)?, 1.0, Origin::Input)?;
                    }
                }
            }
        }
    }
    Ok(set)
}

/// Number of windows `extract_patterns` enumerates.
pub fn window_count(width: usize, height: usize, opts: &ExtractionOptions) -> usize {
    if width < opts.n || height < opts.n {
        0
    } else if opts.periodic_input {
        width * height
    } else {
        (width - opts.n + 1) * (height - opts.n + 1)
    }
}

/// Synthesizes mask patterns from every canvas window containing an obstacle.
/// Obstacle cells stay concrete; Free cells 4-adjacent to an obstacle inside
/// the window become [`PatternCell::MaskAnyButPath`], and the remaining Free
/// cells become [`PatternCell::MaskAny`]. Windows are the in-bounds windows
/// of the canvas, including those touching its edges.
pub fn synthesize_masks(canvas: &Grid<TileClass>, n: usize) -> Result<Vec<Pattern>, PatternError> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    if canvas.width() < n || canvas.height() < n {
        return Ok(out);
    }
    for y0 in 0..=canvas.height() - n {
        for x0 in 0..=canvas.width() - n {
            let obstacle = |x: i64, y: i64| {
                x >= 0
                    && y >= 0
                    && (x as usize) < n
                    && (y as usize) < n
                    && *canvas.get(x0 + x as usize, y0 + y as usize) == TileClass::Obstacle
            };
            if !(0..n as i64).any(|y| (0..n as i64).any(|x| obstacle(x, y))) {
                continue;
            }
            let pattern = Pattern::from_fn(n, |x, y| {
                let (x, y) = (x as i64, y as i64);
                if obstacle(x, y) {
                    PatternCell::Concrete(TileClass::Obstacle)
                } else if obstacle(x + 1, y)
                    || obstacle(x - 1, y)
                    || obstacle(x, y + 1)
                    || obstacle(x, y - 1)
                {
                    PatternCell::MaskAnyButPath
                } else {
                    PatternCell::MaskAny
                }
            })?;
            if seen.insert(pattern.clone(), ()).is_none() {
                out.push(pattern);
            }
        }
    }
    Ok(out)
}

pub fn make_obstacle_interior_pattern(n: usize) -> Result<Pattern, PatternError> {
    Pattern::filled(n, PatternCell::Concrete(TileClass::Obstacle))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PatternWarning {
    /// The sketch uses stretch space but no window is entirely stretch, so the
    /// stretch region cannot grow by overlapping with itself.
    NoAllStretchPattern,
}

impl std::fmt::Display for PatternWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatternWarning::NoAllStretchPattern => f.write_str(
                "sketch uses stretch space but contains no pattern filled entirely with stretch; \
                 widen the stretch region to at least the pattern size",
            ),
        }
    }
}

pub fn validate_stretch_coverage(set: &PatternSet) -> Vec<PatternWarning> {
    let stretch = PatternCell::Concrete(TileClass::Stretch);
    let inputs = || {
        set.patterns()
            .iter()
            .zip(set.origins())
            .filter(|(_, &o)| o == Origin::Input)
            .map(|(p, _)| p)
    };
    let uses_stretch = inputs().any(|p| p.contains(stretch));
    if uses_stretch && !inputs().any(|p| p.is_uniform(stretch)) {
        vec![PatternWarning::NoAllStretchPattern]
    } else {
        Vec::new()
    }
}

/// Per-pattern summary used by debug dumps.
#[derive(Clone, Debug, Serialize)]
pub struct PatternReport {
    pub id: usize,
    pub origin: Origin,
    pub weight: f64,
    pub rows: Vec<String>,
    pub compat: [Vec<u32>; 4],
}

fn cell_char(c: PatternCell) -> char {
    match c {
        PatternCell::Concrete(TileClass::Free) => '.',
        PatternCell::Concrete(TileClass::Obstacle) => '@',
        PatternCell::Concrete(TileClass::Path) => '#',
        PatternCell::Concrete(TileClass::Stretch) => '~',
        PatternCell::MaskAnyButPath => '-',
        PatternCell::MaskAny => '*',
    }
}

/// Text rendering of the inventory and compat table, one entry per pattern.
/// Compat lists are in Right, Left, Down, Up order.
pub fn inventory_report(set: &PatternSet) -> Vec<PatternReport> {
    (0..set.len())
        .map(|id| {
            let p = set.pattern(id);
            let rows = (0..p.n())
                .map(|y| (0..p.n()).map(|x| cell_char(p.get(x, y))).collect())
                .collect();
            let compat = if set.has_compat() {
                Direction::ALL.map(|d| set.compat().allowed(id, d).to_vec())
            } else {
                Default::default()
            };
            PatternReport {
                id,
                origin: set.origins()[id],
                weight: set.weights()[id],
                rows,
                compat,
            }
        })
        .collect()
}
