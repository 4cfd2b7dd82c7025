//! Fixtures and brute-force oracles shared by the integration tests and the
//! acceptance suite. Nothing here calls the code it is used to check.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use pathwfc::model::Direction;
use pathwfc::patterns::Compat;
use pathwfc::postprocess::Waypoint;
use pathwfc::solver::Wave;
use pathwfc::{Grid, LevelMap, PatternCell, TileClass};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// `.` Free, `@` Obstacle, `#` Path, `~` Stretch.
pub fn grid(rows: &[&str]) -> Grid<TileClass> {
    Grid::from_fn(rows[0].len(), rows.len(), |x, y| match rows[y].as_bytes()[x] {
        b'.' => TileClass::Free,
        b'@' => TileClass::Obstacle,
        b'#' => TileClass::Path,
        b'~' => TileClass::Stretch,
        c => panic!("bad fixture char {}", c as char),
    })
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data")
}

pub fn real_map(file: &str) -> (String, LevelMap) {
    let text = std::fs::read_to_string(data_dir().join(file)).expect("map fixture");
    let name = file.trim_end_matches(".map");
    let level = pathwfc::parse_moving_ai_map(name, &text).expect("fixture parses");
    (text, level)
}

/// A Path ring hugging a 3x3 obstacle, three Free cells of margin around.
pub fn ring_sketch() -> Grid<TileClass> {
    grid(&[
        "...........",
        "...........",
        "...........",
        "...#####...",
        "...#@@@#...",
        "...#@@@#...",
        "...#@@@#...",
        "...#####...",
        "...........",
        "...........",
        "...........",
    ])
}

/// 24x24 Free level with one 8x6 obstacle block.
pub fn rect_level() -> LevelMap {
    LevelMap::from_grid(
        "rect",
        Grid::from_fn(24, 24, |x, y| {
            if (8..16).contains(&x) && (9..15).contains(&y) {
                TileClass::Obstacle
            } else {
                TileClass::Free
            }
        }),
    )
}

/// The block of `rect_level` with a 2x2 bite out of its top-right corner.
pub fn notched_level() -> LevelMap {
    let rect = rect_level();
    LevelMap::from_grid(
        "notched",
        Grid::from_fn(24, 24, |x, y| {
            if (14..16).contains(&x) && (9..11).contains(&y) {
                TileClass::Free
            } else {
                *rect.grid().get(x, y)
            }
        }),
    )
}

/// Free level scattered with small irregular obstacles no sketch shows.
pub fn blob_level() -> LevelMap {
    LevelMap::from_grid(
        "blobs",
        grid(&[
            "....................",
            ".@@.................",
            ".@..................",
            "....................",
            "..........@@@@......",
            "..........@@@@......",
            "..........@@........",
            "....................",
            "....................",
            "....@...............",
            "....................",
            "....................",
            "..............@.....",
            ".............@@@....",
            "..............@.....",
            "....................",
        ]),
    )
}

/// Every n x n window of `g` (no wrap, no symmetry), read cell by cell.
pub fn windows(g: &Grid<TileClass>, n: usize) -> HashSet<Vec<TileClass>> {
    let mut out = HashSet::new();
    for y in 0..=g.height() - n {
        for x in 0..=g.width() - n {
            out.insert(window(g, x, y, n));
        }
    }
    out
}

pub fn window(g: &Grid<TileClass>, x: usize, y: usize, n: usize) -> Vec<TileClass> {
    (0..n * n).map(|i| *g.get(x + i % n, y + i / n)).collect()
}

/// First output window that is neither all Obstacle nor an exact copy of
/// some sketch window.
pub fn exact_mismatch(out: &Grid<TileClass>, sketch: &Grid<TileClass>, n: usize) -> Option<(usize, usize)> {
    let allowed = windows(sketch, n);
    for y in 0..=out.height() - n {
        for x in 0..=out.width() - n {
            let w = window(out, x, y, n);
            if w.iter().all(|&c| c == TileClass::Obstacle) {
                continue;
            }
            if !allowed.contains(&w) {
                return Some((x, y));
            }
        }
    }
    None
}

/// First output window, not all Obstacle, that no pattern accepts cell by
/// cell (concrete cells equal, wildcards admit their classes).
pub fn wildcard_mismatch(out: &Grid<TileClass>, patterns: &[Vec<PatternCell>], n: usize) -> Option<(usize, usize)> {
    let accepts = |p: PatternCell, c: TileClass| match p {
        PatternCell::Concrete(k) => k == c,
        PatternCell::MaskAnyButPath => c != TileClass::Path,
        PatternCell::MaskAny => true,
    };
    for y in 0..=out.height() - n {
        for x in 0..=out.width() - n {
            let w = window(out, x, y, n);
            if w.iter().all(|&c| c == TileClass::Obstacle) {
                continue;
            }
            if !patterns.iter().any(|p| p.iter().zip(&w).all(|(&pc, &c)| accepts(pc, c))) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Delete-until-stable arc consistency: remove any pattern that has an
/// in-bounds neighbor holding no compatible pattern, sweep until nothing
/// changes. `possible[cell][pattern]`, cells row-major.
pub fn naive_fixpoint(width: usize, height: usize, compat: &Compat, mut possible: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let t = compat.pattern_count();
    loop {
        let mut changed = false;
        for y in 0..height {
            for x in 0..width {
                let cell = y * width + x;
                for p in 0..t {
                    if !possible[cell][p] {
                        continue;
                    }
                    let dead = Direction::ALL.into_iter().any(|d| {
                        let (dx, dy) = d.offset();
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= width as i64 || ny >= height as i64 {
                            return false;
                        }
                        let nb = ny as usize * width + nx as usize;
                        !compat.allowed(p, d).iter().any(|&q| possible[nb][q as usize])
                    });
                    if dead {
                        possible[cell][p] = false;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return possible;
        }
    }
}

/// Fixed-point scale for the supercover oracle. Waypoints the pipeline emits
/// are dyadic with far fewer fractional bits than this.
const S: i128 = 1 << 24;

fn exact(v: f64) -> i128 {
    let s = v * S as f64;
    assert_eq!(s, s.trunc(), "{v} is not a multiple of 2^-24");
    s as i128
}

/// Supercover traversal with exact arithmetic: every cell whose closed unit
/// square the closed segment touches, edge and corner contact included.
/// Cells off the grid are skipped.
pub fn supercover(a: Waypoint, b: Waypoint, width: usize, height: usize) -> Vec<(usize, usize)> {
    let (ax, ay, bx, by) = (exact(a.x), exact(a.y), exact(b.x), exact(b.y));
    let (minx, maxx) = (ax.min(bx), ax.max(bx));
    let mut out = Vec::new();
    let cx_lo = (minx.div_euclid(S) - 1).max(0);
    let cx_hi = maxx.div_euclid(S).min(width as i128 - 1);
    for cx in cx_lo..=cx_hi {
        let (sx0, sx1) = (cx * S, (cx + 1) * S);
        if sx1 < minx || sx0 > maxx {
            continue;
        }
        // y extent of the segment inside this column, as numerators over `den`.
        let (lo, hi, den) = if ax == bx {
            (ay.min(by), ay.max(by), 1)
        } else {
            let (p, q) = if ax < bx { ((ax, ay), (bx, by)) } else { ((bx, by), (ax, ay)) };
            let den = q.0 - p.0;
            let at = |x: i128| p.1 * den + (x - p.0) * (q.1 - p.1);
            let (y0, y1) = (at(sx0.max(p.0)), at(sx1.min(q.0)));
            (y0.min(y1), y0.max(y1), den)
        };
        let cy_lo = (lo.div_euclid(S * den) - 1).max(0);
        let cy_hi = hi.div_euclid(S * den).min(height as i128 - 1);
        for cy in cy_lo..=cy_hi {
            if cy * S * den <= hi && (cy + 1) * S * den >= lo {
                out.push((cx as usize, cy as usize));
            }
        }
    }
    out
}

pub fn supercover_hits(a: Waypoint, b: Waypoint, g: &Grid<TileClass>) -> bool {
    supercover(a, b, g.width(), g.height())
        .into_iter()
        .any(|(x, y)| *g.get(x, y) == TileClass::Obstacle)
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn dist_to_segment(p: Waypoint, a: Waypoint, b: Waypoint) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0)
    };
    ((p.x - a.x - t * vx).powi(2) + (p.y - a.y - t * vy).powi(2)).sqrt()
}

pub fn dist_to_polyline(p: Waypoint, pts: &[Waypoint]) -> f64 {
    if pts.len() == 1 {
        return dist_to_segment(p, pts[0], pts[0]);
    }
    pts.windows(2)
        .map(|w| dist_to_segment(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two open polylines. Vertices of
/// `a` are measured exactly; edges of each are sampled densely.
pub fn hausdorff(a: &[Waypoint], b: &[Waypoint]) -> f64 {
    let sample = |pts: &[Waypoint]| -> Vec<Waypoint> {
        let mut out = pts.to_vec();
        for w in pts.windows(2) {
            for k in 1..64 {
                out.push(w[0].lerp(w[1], k as f64 / 64.0));
            }
        }
        out
    };
    let ab = sample(a).into_iter().map(|p| dist_to_polyline(p, b)).fold(0.0, f64::max);
    let ba = sample(b).into_iter().map(|p| dist_to_polyline(p, a)).fold(0.0, f64::max);
    ab.max(ba)
}

/// One Chaikin pass written out directly: each edge becomes its 1/4 and 3/4
/// points; open paths keep both endpoints.
pub fn chaikin_closed_form(pts: &[Waypoint], closed: bool) -> Vec<Waypoint> {
    let n = pts.len();
    let edges = if closed { n } else { n - 1 };
    let mut out = Vec::new();
    if !closed {
        out.push(pts[0]);
    }
    for i in 0..edges {
        let (p, q) = (pts[i], pts[(i + 1) % n]);
        out.push(Waypoint::new(0.75 * p.x + 0.25 * q.x, 0.75 * p.y + 0.25 * q.y));
        out.push(Waypoint::new(0.25 * p.x + 0.75 * q.x, 0.25 * p.y + 0.75 * q.y));
    }
    if !closed {
        out.push(pts[n - 1]);
    }
    out
}

/// Bans `bans` in a fresh wave, propagates, and compares with the naive
/// fixpoint. A contradiction must coincide with an emptied cell; returns
/// whether one occurred.
pub fn ac4_agrees_with_fixpoint(seed: u64) -> Result<bool, String> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let (w, h) = (rng.random_range(1..=6), rng.random_range(1..=6));
    let t = rng.random_range(1..=10);
    let compat = random_compat(t, rng.random_range(0.2..0.9), &mut rng);
    let weights: Vec<f64> = (0..t).map(|_| rng.random_range(0.5..4.0)).collect();
    let mut start = vec![vec![true; t]; w * h];
    let bans = rng.random_range(0..=w * h * t / 2);
    for _ in 0..bans {
        start[rng.random_range(0..w * h)][rng.random_range(0..t)] = false;
    }
    let expected = naive_fixpoint(w, h, &compat, start.clone());
    let emptied = expected.iter().any(|c| c.iter().all(|&p| !p));

    let mut wave = Wave::new(w, h, &compat, &weights);
    let result = (|| {
        for (cell, ps) in start.iter().enumerate() {
            for (p, &ok) in ps.iter().enumerate() {
                if !ok {
                    wave.ban(cell, p)?;
                }
            }
        }
        wave.propagate()?;
        wave.ban_unsupported()?;
        wave.propagate()
    })();
    match result {
        Err(_) if emptied => Ok(true),
        Err(c) => Err(format!("seed {seed}: spurious contradiction at {c:?}")),
        Ok(()) if emptied => Err(format!("seed {seed}: missed a contradiction")),
        Ok(()) => {
            for (cell, ps) in expected.iter().enumerate() {
                for (p, &ok) in ps.iter().enumerate() {
                    if wave.is_possible(cell, p) != ok {
                        return Err(format!("seed {seed}: cell {cell} pattern {p} differs"));
                    }
                }
            }
            if !wave.supports_are_coherent() {
                return Err(format!("seed {seed}: support counters incoherent"));
            }
            Ok(false)
        }
    }
}

/// Symmetric random compat table over `t` patterns.
pub fn random_compat(t: usize, density: f64, rng: &mut impl Rng) -> Compat {
    let mut table: Vec<[Vec<u32>; 4]> = (0..t).map(|_| Default::default()).collect();
    for p in 0..t {
        for q in 0..t {
            for d in [Direction::Right, Direction::Down] {
                if rng.random_bool(density) {
                    table[p][d.index()].push(q as u32);
                    table[q][d.opposite().index()].push(p as u32);
                }
            }
        }
    }
    for row in &mut table {
        for list in row.iter_mut() {
            list.sort_unstable();
        }
    }
    Compat::from_table(table)
}
