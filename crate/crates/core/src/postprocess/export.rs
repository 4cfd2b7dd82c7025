use std::fmt::Write;

use crate::grid::Grid;
use crate::model::{Palette, TileClass};

use super::PathSet;

/// Waypoint JSON: an array of `{closed, points: [[x, y], ...], stage}` with
/// six decimals per coordinate. Written by hand so the number format is fixed.
pub fn waypoints_json(set: &PathSet) -> String {
    let stage = set.stage().name();
    let mut out = String::from("[");
    for (i, path) in set.paths.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "\n  {{\"closed\": {}, \"points\": [", path.closed).unwrap();
        for (j, p) in path.points.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            write!(out, "[{:.6}, {:.6}]", p.x, p.y).unwrap();
        }
        write!(out, "], \"stage\": \"{stage}\"}}").unwrap();
    }
    if !set.paths.is_empty() {
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

/// SVG overlay: the raster as cell rectangles (obstacles filled) with paths
/// as polylines and polygons on top. One cell is `scale` pixels.
pub fn paths_to_svg(raster: &Grid<TileClass>, set: &PathSet, palette: &Palette, scale: u32) -> String {
    let s = scale as f64;
    let (w, h) = (raster.width() as f64 * s, raster.height() as f64 * s);
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"#FFFFFF\"/>").unwrap();
    for (x, y, c) in raster.enumerate() {
        if *c == TileClass::Free {
            continue;
        }
        let class = if *c == TileClass::Obstacle { "obstacle" } else { "tile" };
        writeln!(
            out,
            "<rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{s}\" height=\"{s}\" fill=\"{}\" fill-opacity=\"{}\"/>",
            x as f64 * s,
            y as f64 * s,
            palette.color(*c).to_hex(),
            if *c == TileClass::Obstacle { "1" } else { "0.35" },
        )
        .unwrap();
    }
    for path in &set.paths {
        let tag = if path.closed { "polygon" } else { "polyline" };
        let mut pts = String::new();
        for (j, p) in path.points.iter().enumerate() {
            if j > 0 {
                pts.push(' ');
            }
            write!(pts, "{:.3},{:.3}", p.x * s, p.y * s).unwrap();
        }
        writeln!(
            out,
            "<{tag} points=\"{pts}\" fill=\"none\" stroke=\"#0050FF\" stroke-width=\"{:.2}\"/>",
            (s / 4.0).max(1.0)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
