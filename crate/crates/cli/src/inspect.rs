//! `inspect`: a text report on a sketch and/or a level.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use pathwfc::grid::Grid;
use pathwfc::ingest::level_to_output_canvas;
use pathwfc::patterns::{
    extract_patterns, inventory_report, synthesize_masks, validate_stretch_coverage,
    ExtractionOptions,
};
use pathwfc::{Palette, PatternCell, PatternSet, Symmetry, TileClass};

use crate::{read_level, read_sketch, CliError};

pub struct InspectRequest {
    pub sketch: Option<PathBuf>,
    pub level: Option<PathBuf>,
    pub n: usize,
    pub symmetry: Symmetry,
    pub palette: Palette,
    /// Directory for a pattern contact sheet and the compat table.
    pub dump: Option<PathBuf>,
}

fn histogram(grid: &Grid<TileClass>) -> String {
    let mut counts = [0usize; 4];
    for c in grid.iter() {
        counts[c.index()] += 1;
    }
    TileClass::ALL
        .iter()
        .map(|c| format!("{c:?}={}", counts[c.index()]))
        .collect::<Vec<_>>()
        .join(" ")
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn inspect(req: &InspectRequest) -> Result<String, CliError> {
    if req.sketch.is_none() && req.level.is_none() {
        return Err(CliError::Config("inspect needs --sketch and/or --level".into()));
    }
    let opts = ExtractionOptions {
        n: req.n,
        symmetry: req.symmetry,
        periodic_input: false,
    };
    let mut out = String::new();
    let mut set = None;
    if let Some(path) = &req.sketch {
        let sketch = read_sketch(path, &req.palette, req.n)?;
        let g = &sketch.grid;
        writeln!(out, "sketch {} ({}x{})", path.display(), g.width(), g.height()).unwrap();
        writeln!(out, "  classes: {}", histogram(g)).unwrap();
        let s = extract_patterns(&sketch, &opts).map_err(|e| CliError::Config(e.to_string()))?;
        writeln!(
            out,
            "  extracted: {} (n={}, symmetry={})",
            plural(s.len(), "pattern"),
            req.n,
            match req.symmetry {
                Symmetry::None => "none",
                Symmetry::RotationsAndReflections => "all",
            }
        )
        .unwrap();
        for w in validate_stretch_coverage(&s) {
            writeln!(out, "  warning: {w}").unwrap();
        }
        set = Some(s);
    }
    if let Some(path) = &req.level {
        let level = read_level(path)?;
        writeln!(out, "level {} ({}x{})", path.display(), level.width(), level.height()).unwrap();
        writeln!(out, "  classes: {}", histogram(level.grid())).unwrap();
        if level.width() >= req.n && level.height() >= req.n {
            let masks = synthesize_masks(&level_to_output_canvas(&level), req.n)
                .map_err(|e| CliError::Config(e.to_string()))?;
            writeln!(out, "  masks: {}", plural(masks.len(), "pattern")).unwrap();
        }
    }
    if let (Some(dir), Some(set)) = (&req.dump, &mut set) {
        set.build_compat().map_err(|e| CliError::Config(e.to_string()))?;
        dump(dir, set, &req.palette)?;
        writeln!(out, "dumped patterns to {}", dir.display()).unwrap();
    }
    Ok(out)
}

/// Writes `patterns.png` (one tile per pattern, row-major by id) and
/// `patterns.json` (inventory with compat lists).
fn dump(dir: &Path, set: &PatternSet, palette: &Palette) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    const CELL: u32 = 8;
    const GAP: u32 = 2;
    let n = set.n() as u32;
    let cols = (set.len() as f64).sqrt().ceil().max(1.0) as u32;
    let rows = (set.len() as u32).div_ceil(cols).max(1);
    let tile = n * CELL + GAP;
    let mut img = image::RgbImage::from_pixel(cols * tile + GAP, rows * tile + GAP, image::Rgb([0x40, 0x40, 0x40]));
    for (id, p) in set.patterns().iter().enumerate() {
        let (tx, ty) = (id as u32 % cols, id as u32 / cols);
        for (i, &c) in p.cells().iter().enumerate() {
            let color = match c {
                PatternCell::Concrete(class) => palette.color(class).0,
                PatternCell::MaskAnyButPath => [0xC0, 0xC0, 0xC0],
                PatternCell::MaskAny => [0x90, 0x90, 0x90],
            };
            let (cx, cy) = (i as u32 % n, i as u32 / n);
            for dy in 0..CELL {
                for dx in 0..CELL {
                    img.put_pixel(
                        GAP + tx * tile + cx * CELL + dx,
                        GAP + ty * tile + cy * CELL + dy,
                        image::Rgb(color),
                    );
                }
            }
        }
    }
    let png = dir.join("patterns.png");
    img.save(&png).map_err(|e| CliError::io(&png, e))?;
    let json = serde_json::to_string_pretty(&inventory_report(set)).expect("report serializes");
    let path = dir.join("patterns.json");
    std::fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))
}
