use crate::grid::Grid;
use crate::model::TileClass;

use super::{segment_hits_obstacle, Path};

/// One round of corner cutting.
fn chaikin_once(path: &Path, level: &Grid<TileClass>) -> Path {
    let pts = &path.points;
    let n = pts.len();
    let seg_count = if path.closed { n } else { n - 1 };
    let q = |i: usize| pts[i].lerp(pts[(i + 1) % n], 0.25);
    let r = |i: usize| pts[i].lerp(pts[(i + 1) % n], 0.75);
    // Vertex v sits between segment v-1 (ending in r) and segment v (starting in q).
    let keeps_corner = |v: usize| {
        let prev = (v + n - 1) % n;
        segment_hits_obstacle(r(prev), q(v), level)
    };

    let mut out = Vec::with_capacity(2 * n + 2);
    if path.closed {
        for i in 0..seg_count {
            if keeps_corner(i) {
                out.push(pts[i]);
            }
            out.push(q(i));
            out.push(r(i));
        }
        // Vertex 0 belongs after the last segment, keeping the cyclic order
        // starting at the first cut point.
        if keeps_corner(0) {
            out.remove(0);
            out.push(pts[0]);
        }
    } else {
        out.push(pts[0]);
        for i in 0..seg_count {
            if i > 0 && keeps_corner(i) {
                out.push(pts[i]);
            }
            out.push(q(i));
            out.push(r(i));
        }
        out.push(pts[n - 1]);
    }
    Path {
        points: out,
        closed: path.closed,
    }
}

/// Obstacle-aware Chaikin smoothing. Segments are replaced by their 1/4 and
/// 3/4 points; open paths keep their endpoints. A corner whose cut chord
/// would touch an obstacle is left in place for that round.
pub fn smooth_path(path: &Path, iterations: u32, level: &Grid<TileClass>) -> Path {
    let mut p = path.clone();
    if p.len() < 2 {
        return p;
    }
    for _ in 0..iterations {
        p = chaikin_once(&p, level);
    }
    p
}
