//! Deterministic SVG rendering of instances and coverage paths.

use std::fmt::Write as _;

use crate::estc::CoveragePath;
use crate::grid::DecomposedGraph;

/// Pixels per terrain cell.
pub const CELL_PX: f64 = 24.0;

pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

pub fn robot_color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn centre(d: &DecomposedGraph, v: usize) -> (f64, f64) {
    let c = d.coord(v);
    let half = CELL_PX / 2.0;
    ((c.col as f64 + 0.5) * half, (c.row as f64 + 0.5) * half)
}

fn star(cx: f64, cy: f64, r: f64) -> String {
    (0..10)
        .map(|k| {
            let radius = if k % 2 == 0 { r } else { r * 0.45 };
            let a = std::f64::consts::PI * (k as f64 / 5.0 - 0.5);
            format!("{:.2},{:.2}", cx + radius * a.cos(), cy + radius * a.sin())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Terrain cells as squares (obstacles dark, removed subcells grey), each
/// path as a closed polyline in its robot's colour and roots as stars.
pub fn render_svg(d: &DecomposedGraph, roots: &[usize], paths: &[CoveragePath]) -> String {
    let g = d.terrain();
    let (w, h) = (g.width() as f64 * CELL_PX, g.height() as f64 * CELL_PX);
    let half = CELL_PX / 2.0;
    let mut out = String::new();
    let _ = writeln!(out, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##
    );
    let _ = writeln!(out, r##"<g id="terrain" stroke="#bbbbbb" stroke-width="0.5">"##);
    for cell in 0..g.len() {
        let c = g.coord(cell);
        let fill = if g.is_present(cell) { "#ffffff" } else { "#333333" };
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{CELL_PX}" height="{CELL_PX}" fill="{fill}"/>"##,
            c.col as f64 * CELL_PX,
            c.row as f64 * CELL_PX
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="removed" fill="#cccccc">"##);
    for cell in g.present_cells() {
        for v in d.subcells(cell) {
            if !d.is_present(v) {
                let s = d.coord(v);
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="{}" width="{half}" height="{half}"/>"##,
                    s.col as f64 * half,
                    s.row as f64 * half
                );
            }
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="paths" fill="none" stroke-width="2" stroke-linejoin="round">"##);
    for (i, path) in paths.iter().enumerate() {
        let pts = path
            .closed()
            .map(|v| {
                let (x, y) = centre(d, v);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, r##"<polyline stroke="{}" points="{pts}"/>"##, robot_color(i));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="roots" stroke="#000000" stroke-width="0.5">"##);
    for (i, &r) in roots.iter().enumerate() {
        let (x, y) = centre(d, r);
        let _ = writeln!(
            out,
            r##"<polygon fill="{}" points="{}"/>"##,
            robot_color(i),
            star(x, y, half * 0.45)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estc::estc_path;
    use crate::grid::{SubCellCoord, TerrainGraph};

    #[test]
    fn map_only_without_paths() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 2), &[SubCellCoord::new(0, 0)]).unwrap();
        let svg = render_svg(&d, &[], &[]);
        assert!(svg.starts_with("<?xml"));
        assert!(!svg.contains("<polyline"));
        assert_eq!(svg.matches("<rect").count(), 5);
    }

    #[test]
    fn distinct_colours_and_stable_bytes() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let west = crate::grid::VertexSet::from_indices(d.len(), d.subcells(0));
        let east = crate::grid::VertexSet::from_indices(d.len(), d.subcells(1));
        let roots = [d.subcells(0)[0], d.subcells(1)[0]];
        let paths = vec![estc_path(&d, &west, roots[0]).unwrap(), estc_path(&d, &east, roots[1]).unwrap()];
        let svg = render_svg(&d, &roots, &paths);
        assert!(svg.contains(PALETTE[0]) && svg.contains(PALETTE[1]));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert_eq!(svg, render_svg(&d, &roots, &paths));
    }
}
