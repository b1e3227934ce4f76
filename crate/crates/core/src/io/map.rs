//! The plain-text grid map format used by common 2D pathfinding benchmarks:
//!
//! ```text
//! type octile
//! height 2
//! width 3
//! map
//! ..@
//! ...
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::TerrainGraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Whether a terrain character is traversable.
pub fn is_passable(c: char) -> Option<bool> {
    match c {
        '.' | 'G' | 'S' => Some(true),
        '@' | 'O' | 'T' | 'W' => Some(false),
        _ => None,
    }
}

fn header_value(lines: &[(usize, &str)], idx: usize, key: &str) -> Result<usize> {
    let &(line, text) = lines
        .get(idx)
        .ok_or_else(|| parse_err(idx + 1, format!("missing '{key}' header")))?;
    let mut parts = text.split_whitespace();
    if parts.next() != Some(key) {
        return Err(parse_err(line, format!("expected '{key}' header")));
    }
    let value = parts
        .next()
        .ok_or_else(|| parse_err(line, format!("'{key}' has no value")))?;
    value
        .parse()
        .map_err(|_| parse_err(line, format!("'{key}' value '{value}' is not a non-negative integer")))
}

/// Parses a map; passable cells become terrain vertices joined by unit
/// weight edges.
pub fn parse_map(text: &str) -> Result<TerrainGraph> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .collect();
    match lines.first() {
        Some((_, l)) if l.split_whitespace().next() == Some("type") => {}
        _ => return Err(parse_err(1, "expected 'type' header")),
    }
    let height = header_value(&lines, 1, "height")?;
    let width = header_value(&lines, 2, "width")?;
    match lines.get(3) {
        Some((_, l)) if l.trim() == "map" => {}
        _ => return Err(parse_err(4, "expected 'map' line")),
    }
    if width == 0 || height == 0 {
        return Err(parse_err(2, "map dimensions must be positive"));
    }
    let rows: Vec<(usize, &str)> = lines[4..]
        .iter()
        .copied()
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if rows.len() != height {
        let line = rows.last().map_or(4, |r| r.0);
        return Err(parse_err(line, format!("expected {height} rows, found {}", rows.len())));
    }
    let mut present = Vec::with_capacity(width * height);
    for (line, row) in rows {
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != width {
            return Err(parse_err(line, format!("row has {} cells, expected {width}", chars.len())));
        }
        for c in chars {
            present.push(is_passable(c).ok_or_else(|| parse_err(line, format!("unknown terrain character '{c}'")))?);
        }
    }
    TerrainGraph::new(width, height, present)
}

/// Writes the terrain's presence pattern in map format.
pub fn write_map(g: &TerrainGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "type octile\nheight {}\nwidth {}\nmap", g.height(), g.width());
    for row in map_rows(g) {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// One string per terrain row, '.' for present and '@' for absent cells.
pub fn map_rows(g: &TerrainGraph) -> Vec<String> {
    (0..g.height())
        .map(|r| {
            (0..g.width())
                .map(|c| if g.is_present(r * g.width() + c) { '.' } else { '@' })
                .collect()
        })
        .collect()
}

/// Builds a terrain graph from rows of map characters.
pub fn parse_rows(rows: &[String]) -> Result<TerrainGraph> {
    let height = rows.len();
    let width = rows.first().map_or(0, |r| r.chars().count());
    if width == 0 {
        return Err(Error::Instance("grid must have at least one non-empty row".into()));
    }
    let mut present = Vec::with_capacity(width * height);
    for (i, row) in rows.iter().enumerate() {
        if row.chars().count() != width {
            return Err(Error::Instance(format!("grid row {i} has a different width")));
        }
        for c in row.chars() {
            present.push(
                is_passable(c).ok_or_else(|| Error::Instance(format!("unknown terrain character '{c}' in grid row {i}")))?,
            );
        }
    }
    TerrainGraph::new(width, height, present)
}
