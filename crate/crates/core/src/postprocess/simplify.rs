use crate::grid::Grid;
use crate::model::TileClass;

use super::{segment_hits_obstacle, Path, Waypoint};

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Waypoint, a: Waypoint, b: Waypoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Waypoint::new(a.x + t * dx, a.y + t * dy))
}

/// First interior index of maximum distance from the chord `pts[lo]..pts[hi]`.
fn farthest(pts: &[Waypoint], lo: usize, hi: usize) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for k in lo + 1..hi {
        let d = point_segment_distance(pts[k], pts[lo], pts[hi]);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((k, d));
        }
    }
    best
}

/// Marks the vertices of `pts[lo..=hi]` that survive RDP. Both ends are
/// assumed kept. A chord touching an obstacle is never accepted, so the
/// farthest point is kept even when it lies within `epsilon`.
fn rdp(pts: &[Waypoint], lo: usize, hi: usize, eps: f64, level: &Grid<TileClass>, keep: &mut [bool]) {
    let mut stack = vec![(lo, hi)];
    while let Some((lo, hi)) = stack.pop() {
        let Some((k, d)) = farthest(pts, lo, hi) else { continue };
        if d > eps || segment_hits_obstacle(pts[lo], pts[hi], level) {
            keep[k] = true;
            stack.push((lo, k));
            stack.push((k, hi));
        }
    }
}

/// Obstacle-aware Ramer-Douglas-Peucker. Closed paths are cut at their two
/// mutually farthest vertices and each half is simplified on its own.
pub fn simplify_path(path: &Path, epsilon: f64, level: &Grid<TileClass>) -> Path {
    let pts = &path.points;
    let n = pts.len();
    if n < 3 {
        return path.clone();
    }
    let mut keep = vec![false; n];
    if !path.closed {
        keep[0] = true;
        keep[n - 1] = true;
        rdp(pts, 0, n - 1, epsilon, level, &mut keep);
    } else {
        let (i, j) = farthest_pair(pts);
        keep[i] = true;
        keep[j] = true;
        // The half from j back round to i, unrolled into a contiguous run.
        let wrapped: Vec<Waypoint> = (j..n + i + 1).map(|k| pts[k % n]).collect();
        let mut keep_wrapped = vec![false; wrapped.len()];
        rdp(pts, i, j, epsilon, level, &mut keep);
        rdp(&wrapped, 0, wrapped.len() - 1, epsilon, level, &mut keep_wrapped);
        for (off, &k) in keep_wrapped.iter().enumerate() {
            keep[(j + off) % n] |= k;
        }
        if keep.iter().filter(|&&k| k).count() < 3 {
            // Both halves collapsed to their chord; keep the vertex farthest
            // from it on the half with more vertices.
            let first = j - i - 1;
            let second = wrapped.len() - 2;
            let k = if first >= second {
                farthest(pts, i, j).map(|(k, _)| k)
            } else {
                farthest(&wrapped, 0, wrapped.len() - 1).map(|(k, _)| (j + k) % n)
            };
            if let Some(k) = k {
                keep[k] = true;
            }
        }
    }
    Path {
        points: pts.iter().zip(&keep).filter(|(_, &k)| k).map(|(&p, _)| p).collect(),
        closed: path.closed,
    }
}

/// Lexicographically first pair `(i, j)` with `i < j` at maximum distance.
fn farthest_pair(pts: &[Waypoint]) -> (usize, usize) {
    let mut best = (0, 1, -1.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].distance(pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}
