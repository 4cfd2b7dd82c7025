use crate::grid::Grid;
use crate::model::TileClass;

use super::{Path, Waypoint};

/// Fixed-point scale. Waypoints produced by tracing, RDP and Chaikin are
/// dyadic with few fractional bits, so they convert exactly.
const SCALE: f64 = (1u64 << 32) as f64;
const ONE: i128 = 1 << 32;

fn fixed(v: f64) -> i128 {
    (v * SCALE).round() as i128
}

/// Closed segment against the closed square `[cx, cx+1] x [cy, cy+1]`, in
/// fixed point. Separating axes: the two box axes, then the segment normal.
fn segment_touches_cell(a: (i128, i128), b: (i128, i128), cx: i128, cy: i128) -> bool {
    let (x0, y0) = (cx * ONE, cy * ONE);
    let (x1, y1) = (x0 + ONE, y0 + ONE);
    if a.0.max(b.0) < x0 || a.0.min(b.0) > x1 || a.1.max(b.1) < y0 || a.1.min(b.1) > y1 {
        return false;
    }
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let side = |px: i128, py: i128| (dx * (py - a.1) - dy * (px - a.0)).signum();
    let s = [side(x0, y0), side(x1, y0), side(x0, y1), side(x1, y1)];
    !(s.iter().all(|&v| v > 0) || s.iter().all(|&v| v < 0))
}

/// True iff the closed segment `[a, b]` meets the closed unit square of some
/// Obstacle cell. Corner and edge contact count as hits.
pub fn segment_hits_obstacle(a: Waypoint, b: Waypoint, obstacles: &Grid<TileClass>) -> bool {
    let (fa, fb) = ((fixed(a.x), fixed(a.y)), (fixed(b.x), fixed(b.y)));
    let w = obstacles.width() as i64;
    let h = obstacles.height() as i64;
    let cx_lo = (a.x.min(b.x).ceil() as i64 - 1).max(0);
    let cx_hi = (a.x.max(b.x).floor() as i64).min(w - 1);
    for cx in cx_lo..=cx_hi {
        // Rows the segment can reach inside this column strip, widened by a
        // cell on each side; the exact test decides.
        let (ylo, yhi) = strip_y_range(a, b, cx as f64, cx as f64 + 1.0);
        let cy_lo = (ylo.floor() as i64 - 1).max(0);
        let cy_hi = (yhi.floor() as i64 + 1).min(h - 1);
        for cy in cy_lo..=cy_hi {
            if *obstacles.get(cx as usize, cy as usize) == TileClass::Obstacle
                && segment_touches_cell(fa, fb, cx as i128, cy as i128)
            {
                return true;
            }
        }
    }
    false
}

fn strip_y_range(a: Waypoint, b: Waypoint, x0: f64, x1: f64) -> (f64, f64) {
    if a.x == b.x {
        return (a.y.min(b.y), a.y.max(b.y));
    }
    let at = |x: f64| {
        let t = ((x - a.x) / (b.x - a.x)).clamp(0.0, 1.0);
        a.y + t * (b.y - a.y)
    };
    let (y0, y1) = (at(x0), at(x1));
    (y0.min(y1), y0.max(y1))
}

pub fn path_hits_obstacle(path: &Path, obstacles: &Grid<TileClass>) -> bool {
    path.segments().any(|(a, b)| segment_hits_obstacle(a, b, obstacles))
}
