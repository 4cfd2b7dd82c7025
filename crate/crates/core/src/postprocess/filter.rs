use crate::grid::Grid;
use crate::model::TileClass;

use super::{Path, Waypoint};

/// Even-odd rule, casting a ray toward +x. Points exactly on an edge may
/// land on either side.
pub fn point_in_polygon(p: Waypoint, polygon: &[Waypoint]) -> bool {
    let mut inside = false;
    let n = polygon.len();
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Whether a closed path has at least one Obstacle cell centre inside it.
pub fn path_encloses_obstacle(path: &Path, level: &Grid<TileClass>) -> bool {
    path.closed
        && level.enumerate().any(|(x, y, c)| {
            *c == TileClass::Obstacle && point_in_polygon(Waypoint::cell_center(x, y), &path.points)
        })
}

/// Drops paths with fewer than `min_len` waypoints, and, when
/// `require_enclosure` is set, closed paths that enclose no obstacle.
pub fn filter_paths(
    paths: Vec<Path>,
    min_len: usize,
    require_enclosure: bool,
    level: &Grid<TileClass>,
) -> Vec<Path> {
    paths
        .into_iter()
        .filter(|p| p.len() >= min_len)
        .filter(|p| !(require_enclosure && p.closed) || path_encloses_obstacle(p, level))
        .collect()
}
