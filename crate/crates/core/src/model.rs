//! Shared vocabulary: tile classes, palettes, pattern cells, patterns and
//! solver configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileClass {
    Free,
    Obstacle,
    Path,
    Stretch,
}

impl TileClass {
    pub const ALL: [TileClass; 4] = [
        TileClass::Free,
        TileClass::Obstacle,
        TileClass::Path,
        TileClass::Stretch,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn bit(self) -> ClassSet {
        ClassSet(1 << self as u8)
    }

    pub fn name(self) -> &'static str {
        match self {
            TileClass::Free => "free",
            TileClass::Obstacle => "obstacle",
            TileClass::Path => "path",
            TileClass::Stretch => "stretch",
        }
    }
}

impl fmt::Display for TileClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bit set over the four tile classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ClassSet(pub u8);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);
    pub const ALL: ClassSet = ClassSet(0b1111);
    /// Every class a Free canvas cell may take in the output.
    pub const NON_OBSTACLE: ClassSet = ClassSet(0b1101);

    #[inline]
    pub fn contains(self, class: TileClass) -> bool {
        self.0 & class.bit().0 != 0
    }

    #[inline]
    pub fn intersects(self, other: ClassSet) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn is_subset_of(self, other: ClassSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn without(self, class: TileClass) -> ClassSet {
        ClassSet(self.0 & !class.bit().0)
    }
}

/// 24-bit RGB color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const WHITE: Rgb = Rgb([0xFF, 0xFF, 0xFF]);
    pub const RED: Rgb = Rgb([0xFF, 0x00, 0x00]);
    pub const BLACK: Rgb = Rgb([0x00, 0x00, 0x00]);
    pub const LIGHT_BLUE: Rgb = Rgb([0xAD, 0xD8, 0xE6]);

    pub fn to_hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid color `{0}`: expected #RRGGBB")]
pub struct ColorParseError(pub String);

impl FromStr for Rgb {
    type Err = ColorParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s.strip_prefix('#').unwrap_or(s);
        if hex.len() != 6 || !hex.is_ascii() {
            return Err(ColorParseError(s.to_string()));
        }
        let byte = |i: usize| {
            u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| ColorParseError(s.to_string()))
        };
        Ok(Rgb([byte(0)?, byte(2)?, byte(4)?]))
    }
}

impl Serialize for Rgb {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaletteError {
    #[error("classes {a} and {b} share the color {color}")]
    DuplicateColor {
        a: TileClass,
        b: TileClass,
        color: Rgb,
    },
}

/// One canonical color per tile class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    colors: [Rgb; 4],
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            colors: [Rgb::WHITE, Rgb::RED, Rgb::BLACK, Rgb::LIGHT_BLUE],
        }
    }
}

impl Palette {
    pub fn new(free: Rgb, obstacle: Rgb, path: Rgb, stretch: Rgb) -> Result<Self, PaletteError> {
        let colors = [free, obstacle, path, stretch];
        for i in 0..4 {
            for j in i + 1..4 {
                if colors[i] == colors[j] {
                    return Err(PaletteError::DuplicateColor {
                        a: TileClass::ALL[i],
                        b: TileClass::ALL[j],
                        color: colors[i],
                    });
                }
            }
        }
        Ok(Self { colors })
    }

    pub fn with_color(self, class: TileClass, color: Rgb) -> Result<Self, PaletteError> {
        let mut colors = self.colors;
        colors[class.index()] = color;
        Self::new(colors[0], colors[1], colors[2], colors[3])
    }

    #[inline]
    pub fn color(&self, class: TileClass) -> Rgb {
        self.colors[class.index()]
    }

    pub fn classify(&self, color: Rgb) -> Option<TileClass> {
        TileClass::ALL
            .into_iter()
            .find(|c| self.colors[c.index()] == color)
    }
}

/// A cell of a pattern: a concrete class or one of the two mask wildcards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternCell {
    Concrete(TileClass),
    /// Matches Free, Obstacle and Stretch.
    MaskAnyButPath,
    /// Matches all four classes.
    MaskAny,
}

impl PatternCell {
    /// The set of concrete classes this cell accepts.
    #[inline]
    pub fn allowed(self) -> ClassSet {
        match self {
            PatternCell::Concrete(c) => c.bit(),
            PatternCell::MaskAnyButPath => ClassSet::ALL.without(TileClass::Path),
            PatternCell::MaskAny => ClassSet::ALL,
        }
    }

    #[inline]
    pub fn matches(self, class: TileClass) -> bool {
        self.allowed().contains(class)
    }

    #[inline]
    pub fn is_mask(self) -> bool {
        !matches!(self, PatternCell::Concrete(_))
    }

    pub fn concrete(self) -> Option<TileClass> {
        match self {
            PatternCell::Concrete(c) => Some(c),
            _ => None,
        }
    }
}

impl From<TileClass> for PatternCell {
    fn from(c: TileClass) -> Self {
        PatternCell::Concrete(c)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern side must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("pattern side {0} exceeds the supported maximum of 8")]
    TooLarge(usize),
    #[error("mask patterns cannot be transformed")]
    MaskTransform,
    #[error("dihedral transform index must be in 0..8, got {0}")]
    BadTransform(u8),
}

pub const MAX_PATTERN_SIDE: usize = 8;

/// An `n x n` window of pattern cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    n: usize,
    cells: Vec<PatternCell>,
}

impl Pattern {
    pub fn new(n: usize, cells: Vec<PatternCell>) -> Result<Self, PatternError> {
        check_side(n)?;
        assert_eq!(cells.len(), n * n, "pattern cell count must be n*n");
        Ok(Self { n, cells })
    }

    pub fn filled(n: usize, cell: PatternCell) -> Result<Self, PatternError> {
        Self::new(n, vec![cell; n * n])
    }

    pub fn from_fn(
        n: usize,
        mut f: impl FnMut(usize, usize) -> PatternCell,
    ) -> Result<Self, PatternError> {
        check_side(n)?;
        let mut cells = Vec::with_capacity(n * n);
        for y in 0..n {
            for x in 0..n {
                cells.push(f(x, y));
            }
        }
        Ok(Self { n, cells })
    }

    /// Copies the `n x n` window anchored at `(x0, y0)`, wrapping around the
    /// grid edges when `periodic` is set.
    pub fn from_window(
        grid: &Grid<TileClass>,
        x0: usize,
        y0: usize,
        n: usize,
        periodic: bool,
    ) -> Result<Self, PatternError> {
        let (w, h) = (grid.width(), grid.height());
        Self::from_fn(n, |dx, dy| {
            let (x, y) = if periodic {
                ((x0 + dx) % w, (y0 + dy) % h)
            } else {
                (x0 + dx, y0 + dy)
            };
            PatternCell::Concrete(*grid.get(x, y))
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> PatternCell {
        self.cells[y * self.n + x]
    }

    pub fn cells(&self) -> &[PatternCell] {
        &self.cells
    }

    pub fn has_mask(&self) -> bool {
        self.cells.iter().any(|c| c.is_mask())
    }

    pub fn is_uniform(&self, cell: PatternCell) -> bool {
        self.cells.iter().all(|&c| c == cell)
    }

    pub fn contains(&self, cell: PatternCell) -> bool {
        self.cells.contains(&cell)
    }

    /// Returns the pattern rotated clockwise by `90 * (t % 4)` degrees, after a
    /// horizontal reflection when `t >= 4`.
    pub fn transform(&self, t: u8) -> Result<Pattern, PatternError> {
        if t >= 8 {
            return Err(PatternError::BadTransform(t));
        }
        if self.has_mask() {
            return Err(PatternError::MaskTransform);
        }
        let n = self.n;
        let mut out = if t >= 4 {
            Pattern::from_fn(n, |x, y| self.get(n - 1 - x, y))?
        } else {
            self.clone()
        };
        for _ in 0..t % 4 {
            out = out.rotate_cw();
        }
        Ok(out)
    }

    /// Clockwise quarter turn: the cell at `(x, y)` moves to `(n-1-y, x)`.
    fn rotate_cw(&self) -> Pattern {
        let n = self.n;
        let mut cells = vec![PatternCell::MaskAny; n * n];
        for y in 0..n {
            for x in 0..n {
                cells[x * n + (n - 1 - y)] = self.get(x, y);
            }
        }
        Pattern { n, cells }
    }
}

fn check_side(n: usize) -> Result<(), PatternError> {
    if n < 2 {
        Err(PatternError::TooSmall(n))
    } else if n > MAX_PATTERN_SIDE {
        Err(PatternError::TooLarge(n))
    } else {
        Ok(())
    }
}

/// Where a pattern in a set came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Input,
    Mask,
    ObstacleInterior,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    #[default]
    None,
    #[serde(alias = "all", alias = "dihedral")]
    RotationsAndReflections,
}

impl FromStr for Symmetry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Symmetry::None),
            "all" | "rotations_and_reflections" | "dihedral" => {
                Ok(Symmetry::RotationsAndReflections)
            }
            other => Err(format!("unknown symmetry `{other}` (expected none|all)")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    #[default]
    Frequency,
    Uniform,
}

impl FromStr for WeightMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "frequency" => Ok(WeightMode::Frequency),
            "uniform" => Ok(WeightMode::Uniform),
            other => Err(format!(
                "unknown weight mode `{other}` (expected frequency|uniform)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("max_attempts must be at least 1")]
    NoAttempts,
    #[error("entropy_noise must lie in (0, 1e-3), got {0}")]
    EntropyNoise(f64),
    #[error("mask_weight must be positive and finite, got {0}")]
    MaskWeight(f64),
    #[error("snapshot_every must be at least 1")]
    SnapshotEvery,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub n: usize,
    pub symmetry: Symmetry,
    pub weight_mode: WeightMode,
    pub masks_enabled: bool,
    /// Weight given to each synthesized mask pattern.
    pub mask_weight: f64,
    pub periodic_input: bool,
    pub max_attempts: u32,
    pub seed: u64,
    pub entropy_noise: f64,
    pub snapshot_every: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: 3,
            symmetry: Symmetry::None,
            weight_mode: WeightMode::Frequency,
            masks_enabled: false,
            mask_weight: 1.0,
            periodic_input: false,
            max_attempts: 10,
            seed: 0,
            entropy_noise: 1e-6,
            snapshot_every: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_side(self.n)?;
        if self.max_attempts == 0 {
            return Err(ConfigError::NoAttempts);
        }
        if !(self.entropy_noise > 0.0 && self.entropy_noise < 1e-3) {
            return Err(ConfigError::EntropyNoise(self.entropy_noise));
        }
        if !(self.mask_weight > 0.0 && self.mask_weight.is_finite()) {
            return Err(ConfigError::MaskWeight(self.mask_weight));
        }
        if self.snapshot_every == Some(0) {
            return Err(ConfigError::SnapshotEvery);
        }
        Ok(())
    }
}

/// The four cardinal unit offsets used by the propagator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Right = 0,
    Left = 1,
    Down = 2,
    Up = 3,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Right,
        Direction::Left,
        Direction::Down,
        Direction::Up,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn offset(self) -> (i64, i64) {
        match self {
            Direction::Right => (1, 0),
            Direction::Left => (-1, 0),
            Direction::Down => (0, 1),
            Direction::Up => (0, -1),
        }
    }

    #[inline]
    pub fn opposite(self) -> Direction {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}
