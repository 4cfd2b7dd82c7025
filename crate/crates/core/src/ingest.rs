//! Level and sketch ingestion.
//!
//! Levels come from Moving AI ASCII `.map` files. Sketches are raster images
//! classified pixel-by-pixel through a [`Palette`].

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::grid::Grid;
use crate::model::{Palette, Rgb, TileClass};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapParseError {
    #[error("line {line}: missing header line `{expected}`")]
    MissingHeader { line: usize, expected: &'static str },
    #[error("line {line}, column {column}: malformed header, expected `{expected}`, found `{found}`")]
    BadHeader {
        line: usize,
        column: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}, column {column}: unknown map character {found:?}")]
    UnknownChar {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("line {line}: row has {found} cells, header says width {expected}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: map body has {found} rows, header says height {expected}")]
    RowCount {
        line: usize,
        expected: usize,
        found: usize,
    },
}

/// A fixed output level: Free and Obstacle cells only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    pub name: String,
    grid: Grid<TileClass>,
}

impl LevelMap {
    /// Builds a level from a grid. Any class other than Obstacle is treated as Free.
    pub fn from_grid(name: impl Into<String>, grid: Grid<TileClass>) -> Self {
        let grid = grid.map(|&c| {
            if c == TileClass::Obstacle {
                TileClass::Obstacle
            } else {
                TileClass::Free
            }
        });
        Self {
            name: name.into(),
            grid,
        }
    }

    pub fn grid(&self) -> &Grid<TileClass> {
        &self.grid
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }

    pub fn obstacle_count(&self) -> usize {
        self.grid
            .iter()
            .filter(|&&c| c == TileClass::Obstacle)
            .count()
    }

    /// Serializes in Moving AI format using `.` for Free and `@` for Obstacle.
    pub fn to_moving_ai(&self) -> String {
        let mut out = String::with_capacity(self.grid.len() + self.height() + 48);
        let _ = writeln!(out, "type octile");
        let _ = writeln!(out, "height {}", self.height());
        let _ = writeln!(out, "width {}", self.width());
        let _ = writeln!(out, "map");
        for y in 0..self.height() {
            for x in 0..self.width() {
                out.push(match self.grid.get(x, y) {
                    TileClass::Obstacle => '@',
                    _ => '.',
                });
            }
            out.push('\n');
        }
        out
    }

    /// Returns the `width x height` sub-level anchored at `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> LevelMap {
        assert!(x0 + width <= self.width() && y0 + height <= self.height());
        LevelMap {
            name: format!("{}[{x0},{y0} {width}x{height}]", self.name),
            grid: Grid::from_fn(width, height, |x, y| *self.grid.get(x0 + x, y0 + y)),
        }
    }
}

fn classify_map_char(c: char) -> Option<TileClass> {
    match c {
        '.' | 'G' => Some(TileClass::Free),
        '@' | 'O' | 'T' | 'S' | 'W' => Some(TileClass::Obstacle),
        _ => None,
    }
}

fn header_value(
    line_no: usize,
    line: Option<&str>,
    key: &'static str,
    expected: &'static str,
) -> Result<usize, MapParseError> {
    let line = line.ok_or(MapParseError::MissingHeader {
        line: line_no,
        expected,
    })?;
    let bad = |column| MapParseError::BadHeader {
        line: line_no,
        column,
        expected,
        found: line.to_string(),
    };
    let rest = line.strip_prefix(key).ok_or_else(|| bad(1))?;
    let value = rest.trim_start_matches([' ', '\t']);
    if value.len() == rest.len() {
        return Err(bad(key.len() + 1));
    }
    let column = key.len() + 1 + (rest.len() - value.len());
    value.trim_end().parse::<usize>().map_err(|_| bad(column))
}

/// Parses a Moving AI `.map` file. LF and CRLF line endings are accepted,
/// and a trailing newline is optional.
pub fn parse_moving_ai_map(name: &str, text: &str) -> Result<LevelMap, MapParseError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));

    match lines.next() {
        Some(l) if l.trim_end() == "type octile" => {}
        Some(l) if !l.is_empty() => {
            return Err(MapParseError::BadHeader {
                line: 1,
                column: 1,
                expected: "type octile",
                found: l.to_string(),
            })
        }
        _ => {
            return Err(MapParseError::MissingHeader {
                line: 1,
                expected: "type octile",
            })
        }
    }
    let height = header_value(2, lines.next(), "height", "height <H>")?;
    let width = header_value(3, lines.next(), "width", "width <W>")?;
    match lines.next() {
        Some(l) if l.trim_end() == "map" => {}
        Some(l) => {
            return Err(MapParseError::BadHeader {
                line: 4,
                column: 1,
                expected: "map",
                found: l.to_string(),
            })
        }
        None => {
            return Err(MapParseError::MissingHeader {
                line: 4,
                expected: "map",
            })
        }
    }

    let mut cells = Vec::with_capacity(width * height);
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let line_no = i + 5;
        if rows == height {
            if line.trim().is_empty() {
                continue;
            }
            return Err(MapParseError::RowCount {
                line: line_no,
                expected: height,
                found: rows + 1,
            });
        }
        let mut count = 0;
        for (col, ch) in line.chars().enumerate() {
            if count == width {
                return Err(MapParseError::RowLength {
                    line: line_no,
                    expected: width,
                    found: line.chars().count(),
                });
            }
            let class = classify_map_char(ch).ok_or(MapParseError::UnknownChar {
                line: line_no,
                column: col + 1,
                found: ch,
            })?;
            cells.push(class);
            count += 1;
        }
        if count != width {
            return Err(MapParseError::RowLength {
                line: line_no,
                expected: width,
                found: count,
            });
        }
        rows += 1;
    }
    if rows != height {
        return Err(MapParseError::RowCount {
            line: rows + 5,
            expected: height,
            found: rows,
        });
    }
    let grid = Grid::from_vec(width, height, cells).expect("row lengths checked");
    Ok(LevelMap {
        name: name.to_string(),
        grid,
    })
}

#[derive(Debug, Error)]
pub enum SketchError {
    #[error("unmapped color {color} at pixel ({x}, {y})")]
    UnmappedColor { x: usize, y: usize, color: Rgb },
    #[error("sketch is {width}x{height}, smaller than the {n}x{n} pattern size")]
    TooSmall {
        width: usize,
        height: usize,
        n: usize,
    },
    #[error("cannot read sketch image: {0}")]
    Image(#[from] image::ImageError),
}

/// A classified input sketch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SketchImage {
    pub grid: Grid<TileClass>,
    pub source_palette: Palette,
}

impl SketchImage {
    /// Classifies an RGB raster. Alpha, if any, must already be dropped.
    pub fn from_rgb(
        image: &image::RgbImage,
        palette: &Palette,
        n: usize,
    ) -> Result<Self, SketchError> {
        let (w, h) = (image.width() as usize, image.height() as usize);
        if w < n || h < n {
            return Err(SketchError::TooSmall {
                width: w,
                height: h,
                n,
            });
        }
        let mut cells = Vec::with_capacity(w * h);
        for (x, y, px) in image.enumerate_pixels() {
            let color = Rgb(px.0);
            let class = palette.classify(color).ok_or(SketchError::UnmappedColor {
                x: x as usize,
                y: y as usize,
                color,
            })?;
            cells.push(class);
        }
        Ok(Self {
            grid: Grid::from_vec(w, h, cells).expect("pixel count"),
            source_palette: *palette,
        })
    }

    pub fn from_grid(grid: Grid<TileClass>, palette: &Palette) -> Self {
        Self {
            grid,
            source_palette: *palette,
        }
    }

    pub fn uses(&self, class: TileClass) -> bool {
        self.grid.iter().any(|&c| c == class)
    }
}

/// Loads and classifies a raster sketch (PNG or any format `image` decodes).
pub fn load_sketch(path: &Path, palette: &Palette, n: usize) -> Result<SketchImage, SketchError> {
    let img = image::open(path)?.to_rgb8();
    SketchImage::from_rgb(&img, palette, n)
}

/// Renders a class grid through a palette.
pub fn grid_to_image(grid: &Grid<TileClass>, palette: &Palette) -> image::RgbImage {
    image::RgbImage::from_fn(grid.width() as u32, grid.height() as u32, |x, y| {
        image::Rgb(palette.color(*grid.get(x as usize, y as usize)).0)
    })
}

/// The initial output canvas for the solver: an identity copy of the level grid.
pub fn level_to_output_canvas(level: &LevelMap) -> Grid<TileClass> {
    level.grid.clone()
}
