use crate::grid::Grid;
use crate::model::TileClass;

use super::{Path, PathSet, Stage, Waypoint};

/// East, south, west, north. With `y` pointing down, turning left from east
/// gives north.
const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn left_of(d: usize) -> usize {
    (d + 3) % 4
}

fn right_of(d: usize) -> usize {
    (d + 1) % 4
}

fn opposite(d: usize) -> usize {
    (d + 2) % 4
}

struct Tracer<'a> {
    raster: &'a Grid<TileClass>,
    visited: Grid<bool>,
}

impl Tracer<'_> {
    fn is_path(&self, x: i64, y: i64) -> bool {
        self.raster.in_bounds(x, y) && *self.raster.get(x as usize, y as usize) == TileClass::Path
    }

    fn step(&self, (x, y): (usize, usize), d: usize) -> Option<(usize, usize)> {
        let (nx, ny) = (x as i64 + DIRS[d].0, y as i64 + DIRS[d].1);
        self.is_path(nx, ny).then_some((nx as usize, ny as usize))
    }

    fn open_step(&self, at: (usize, usize), d: usize) -> Option<(usize, usize)> {
        self.step(at, d).filter(|&(x, y)| !*self.visited.get(x, y))
    }

    fn degree(&self, at: (usize, usize)) -> usize {
        (0..4).filter(|&d| self.step(at, d).is_some()).count()
    }

    /// Follows unvisited Path cells from `at`, preferring straight, then
    /// left, then right. Without a heading the first open direction in
    /// east, south, west, north order is taken.
    fn walk(&mut self, mut at: (usize, usize), mut heading: Option<usize>) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        loop {
            let choice = match heading {
                Some(h) => [h, left_of(h), right_of(h)]
                    .into_iter()
                    .find_map(|d| self.open_step(at, d).map(|c| (d, c))),
                None => (0..4).find_map(|d| self.open_step(at, d).map(|c| (d, c))),
            };
            let Some((d, next)) = choice else { break };
            self.visited.set(next.0, next.1, true);
            cells.push(next);
            at = next;
            heading = Some(d);
        }
        cells
    }

    fn trace_from(&mut self, start: (usize, usize)) -> Vec<(usize, usize)> {
        self.visited.set(start.0, start.1, true);
        let forward = self.walk(start, None);
        let mut cells = vec![start];
        cells.extend(&forward);
        if is_loop(&cells) {
            return cells;
        }
        let first_dir = forward.first().map(|&next| direction(start, next));
        let backward = self.walk(start, first_dir.map(opposite));
        if backward.is_empty() {
            return cells;
        }
        let mut joined: Vec<_> = backward.into_iter().rev().collect();
        joined.extend(cells);
        joined
    }
}

fn direction(from: (usize, usize), to: (usize, usize)) -> usize {
    let delta = (to.0 as i64 - from.0 as i64, to.1 as i64 - from.1 as i64);
    DIRS.iter().position(|&d| d == delta).expect("cells are 4-adjacent")
}

fn adjacent(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1) == 1
}

fn is_loop(cells: &[(usize, usize)]) -> bool {
    cells.len() >= 4 && adjacent(cells[0], cells[cells.len() - 1])
}

/// Splits the Path cells of a raster into waypoint paths.
///
/// Dead ends (cells with one Path neighbour) seed traces first, in row-major
/// order; whatever remains (loops) is seeded row-major afterwards. Every Path
/// cell ends up in exactly one path, except isolated cells, which are counted
/// in `dropped_isolated`.
pub fn trace_paths(raster: &Grid<TileClass>) -> PathSet {
    let mut tracer = Tracer {
        raster,
        visited: Grid::new(raster.width(), raster.height(), false),
    };
    let path_cells: Vec<(usize, usize)> = raster
        .enumerate()
        .filter(|(_, _, c)| **c == TileClass::Path)
        .map(|(x, y, _)| (x, y))
        .collect();
    let endpoints: Vec<_> = path_cells.iter().copied().filter(|&c| tracer.degree(c) == 1).collect();

    let mut paths = Vec::new();
    let mut dropped_isolated = 0;
    for &start in endpoints.iter().chain(&path_cells) {
        if *tracer.visited.get(start.0, start.1) {
            continue;
        }
        let cells = tracer.trace_from(start);
        if cells.len() < 2 {
            dropped_isolated += 1;
            continue;
        }
        let closed = is_loop(&cells);
        let points = cells.iter().map(|&(x, y)| Waypoint::cell_center(x, y)).collect();
        paths.push(Path { points, closed });
    }
    PathSet {
        paths,
        stages: vec![Stage::Traced],
        dropped_isolated,
    }
}
