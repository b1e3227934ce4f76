//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "demo",
//!   "grid": ["...", ".@."],
//!   "default_weight": 1.0,
//!   "weights": [{ "a": [0, 0], "b": [1, 0], "w": 3.5 }],
//!   "blocked_subcells": [[5, 0]],
//!   "roots": [[0, 0], [5, 3]],
//!   "params": { "iters": 1500, "seed": 3 }
//! }
//! ```
//!
//! Cell-pair weights use terrain coordinates `[col, row]`; roots and blocked
//! subcells use decomposed coordinates. `map_path` (resolved relative to the
//! instance file) may replace `grid`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DecomposedGraph, SubCellCoord, TerrainCoord, TerrainGraph};
use crate::io::map::{map_rows, parse_map, parse_rows};
use crate::search::SearchParams;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ParamOverrides {
    pub fn is_empty(&self) -> bool {
        self == &Self::default()
    }

    /// Search parameters with these overrides on top of the defaults.
    pub fn to_params(&self) -> Result<SearchParams> {
        let d = SearchParams::default();
        SearchParams::with_final_temperature(
            self.iters.unwrap_or(d.max_iters),
            self.dedup_period.unwrap_or(d.dedup_period),
            self.alpha_end.unwrap_or(0.2),
            self.gamma.unwrap_or(d.gamma),
            self.seed.unwrap_or(d.seed),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub w: f64,
}

/// On-disk instance schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<String>>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub default_weight: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<WeightEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocked_subcells: Vec<[usize; 2]>,
    pub roots: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "ParamOverrides::is_empty")]
    pub params: ParamOverrides,
}

fn one() -> f64 {
    1.0
}

fn is_one(w: &f64) -> bool {
    *w == 1.0
}

/// A validated instance: terrain, decomposed graph and robot roots.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub terrain: TerrainGraph,
    pub blocked: Vec<SubCellCoord>,
    pub decomposed: DecomposedGraph,
    pub roots: Vec<usize>,
    pub params: ParamOverrides,
}

impl Instance {
    /// Validates the pieces and builds the decomposed graph.
    pub fn new(
        name: impl Into<String>,
        terrain: TerrainGraph,
        blocked: Vec<SubCellCoord>,
        roots: &[SubCellCoord],
        params: ParamOverrides,
    ) -> Result<Self> {
        let mut blocked = blocked;
        blocked.sort();
        blocked.dedup();
        let decomposed = DecomposedGraph::build(&terrain, &blocked)?;
        if roots.is_empty() {
            return Err(Error::Instance("at least one root is required".into()));
        }
        let mut idx = Vec::with_capacity(roots.len());
        for &r in roots {
            let v = decomposed.require_index(r)?;
            if idx.contains(&v) {
                return Err(Error::DuplicateRoot(r));
            }
            idx.push(v);
        }
        Ok(Self {
            name: name.into(),
            terrain,
            blocked,
            decomposed,
            roots: idx,
            params,
        })
    }

    pub fn num_robots(&self) -> usize {
        self.roots.len()
    }

    pub fn root_coords(&self) -> Vec<SubCellCoord> {
        self.roots.iter().map(|&r| self.decomposed.coord(r)).collect()
    }

    /// Replaces the decomposed graph, recording every subcell absent from
    /// a present terrain cell as blocked.
    pub fn with_decomposed(&self, d: DecomposedGraph) -> Result<Self> {
        let blocked = self
            .terrain
            .present_cells()
            .flat_map(|c| d.subcells(c))
            .filter(|&v| !d.is_present(v))
            .map(|v| d.coord(v))
            .collect();
        Self::new(self.name.clone(), self.terrain.clone(), blocked, &self.root_coords(), self.params.clone())
    }

    /// Serializable form with an inline grid and every non-default weight.
    pub fn to_file(&self) -> InstanceFile {
        let g = &self.terrain;
        let weights = g
            .edges()
            .filter(|&(_, _, w)| w != 1.0)
            .map(|(a, b, w)| {
                let (ca, cb) = (g.coord(a), g.coord(b));
                WeightEntry {
                    a: [ca.col, ca.row],
                    b: [cb.col, cb.row],
                    w,
                }
            })
            .collect();
        InstanceFile {
            name: self.name.clone(),
            map_path: None,
            grid: Some(map_rows(g)),
            default_weight: 1.0,
            weights,
            blocked_subcells: self.blocked.iter().map(|s| [s.col, s.row]).collect(),
            roots: self.root_coords().iter().map(|s| [s.col, s.row]).collect(),
            params: self.params.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

impl InstanceFile {
    /// Resolves the map and validates everything. `base_dir` anchors a
    /// relative `map_path`.
    pub fn into_instance(self, base_dir: Option<&Path>) -> Result<Instance> {
        let mut terrain = match (&self.grid, &self.map_path) {
            (Some(rows), None) => parse_rows(rows)?,
            (None, Some(p)) => {
                let path = match base_dir {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.clone(),
                };
                parse_map(&fs::read_to_string(&path)?)?
            }
            _ => return Err(Error::Instance("exactly one of 'grid' and 'map_path' is required".into())),
        };
        if self.default_weight != 1.0 {
            let edges: Vec<(usize, usize)> = terrain.edges().map(|(a, b, _)| (a, b)).collect();
            for (a, b) in edges {
                let (ca, cb) = (terrain.coord(a), terrain.coord(b));
                terrain.set_edge_weight(ca, cb, self.default_weight)?;
            }
        }
        for e in &self.weights {
            terrain.set_edge_weight(TerrainCoord::new(e.a[0], e.a[1]), TerrainCoord::new(e.b[0], e.b[1]), e.w)?;
        }
        let blocked = self.blocked_subcells.iter().map(|&[c, r]| SubCellCoord::new(c, r)).collect();
        let roots: Vec<SubCellCoord> = self.roots.iter().map(|&[c, r]| SubCellCoord::new(c, r)).collect();
        Instance::new(self.name, terrain, blocked, &roots, self.params)
    }
}

pub fn parse_instance(text: &str, base_dir: Option<&Path>) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.into_instance(base_dir)
}

/// Loads an instance, naming it after the file stem when unnamed.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    let mut inst = parse_instance(&text, path.parent())?;
    if inst.name.is_empty() {
        inst.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_single_robot() {
        let inst = parse_instance(r#"{"grid": ["."], "roots": [[0, 0]]}"#, None).unwrap();
        assert_eq!(inst.num_robots(), 1);
        assert_eq!(inst.decomposed.num_vertices(), 4);
        assert!(inst.params.is_empty());
    }

    #[test]
    fn colliding_roots_rejected() {
        let err = parse_instance(r#"{"grid": [".."], "roots": [[1, 1], [1, 1]]}"#, None).unwrap_err();
        assert!(matches!(err, Error::DuplicateRoot(_)));
    }

    #[test]
    fn root_on_blocked_subcell_rejected() {
        let text = r#"{"grid": [".."], "blocked_subcells": [[0, 0]], "roots": [[0, 0]]}"#;
        assert!(matches!(parse_instance(text, None), Err(Error::AbsentSubCell(_))));
    }

    #[test]
    fn disconnecting_blocks_named() {
        // blocking every subcell of the middle cell splits the strip
        let text = r#"{"grid": ["..."], "blocked_subcells": [[2, 0], [2, 1], [3, 0], [3, 1]], "roots": [[0, 0]]}"#;
        let err = parse_instance(text, None).unwrap_err();
        match err {
            Error::Disconnected(reps) => assert_eq!(reps.len(), 2),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_instance(r#"{"grid": ["."], "roots": [[0, 0]], "robots": 3}"#, None).is_err());
        assert!(parse_instance(r#"{"roots": [[0, 0]]}"#, None).is_err());
    }

    #[test]
    fn weights_and_defaults_apply() {
        let text = r#"{"grid": ["..", ".."], "default_weight": 2.0,
            "weights": [{"a": [0, 0], "b": [1, 0], "w": 5.0}],
            "roots": [[0, 0]], "params": {"iters": 10, "seed": 4}}"#;
        let inst = parse_instance(text, None).unwrap();
        let g = &inst.terrain;
        assert_eq!(g.edge_weight(0, 1), Some(5.0));
        assert_eq!(g.edge_weight(0, 2), Some(2.0));
        let p = inst.params.to_params().unwrap();
        assert_eq!((p.max_iters, p.seed), (10, 4));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"name": "rt", "grid": ["..@", "..."],
            "weights": [{"a": [0, 0], "b": [1, 0], "w": 5.5}],
            "blocked_subcells": [[5, 3]],
            "roots": [[0, 0], [4, 2]], "params": {"gamma": 0.02}}"#;
        let inst = parse_instance(text, None).unwrap();
        let again = parse_instance(&inst.to_json().unwrap(), None).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn map_path_resolves_relative_to_instance() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("tiny.map"), "type octile\nheight 1\nwidth 2\nmap\n..\n").unwrap();
        let inst_path = dir.path().join("tiny.json");
        fs::write(&inst_path, r#"{"map_path": "tiny.map", "roots": [[0, 0]]}"#).unwrap();
        let inst = load_instance(&inst_path).unwrap();
        assert_eq!(inst.name, "tiny");
        assert_eq!(inst.terrain.num_vertices(), 2);
    }
}
