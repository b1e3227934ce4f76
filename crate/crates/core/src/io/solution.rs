//! JSON form of a solved instance: one closed walk per robot.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estc::CoveragePath;
use crate::grid::{DecomposedGraph, SubCellCoord};
use crate::search::Solution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub robot: usize,
    pub cost: f64,
    /// Cyclic subcell sequence starting at the root.
    pub walk: Vec<SubCellCoord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub instance: String,
    pub seed: u64,
    pub makespan: f64,
    pub paths: Vec<PathEntry>,
}

impl SolutionFile {
    pub fn from_solution(d: &DecomposedGraph, instance: &str, s: &Solution) -> Self {
        Self {
            instance: instance.to_string(),
            seed: s.seed,
            makespan: s.makespan,
            paths: s
                .paths
                .iter()
                .enumerate()
                .map(|(robot, p)| PathEntry {
                    robot,
                    cost: p.cost(),
                    walk: p.vertices().iter().map(|&v| d.coord(v)).collect(),
                })
                .collect(),
        }
    }

    /// Walks resolved against `d`; every step must follow an edge of `d`.
    pub fn to_paths(&self, d: &DecomposedGraph) -> Result<Vec<CoveragePath>> {
        let mut paths = self.paths.clone();
        paths.sort_by_key(|p| p.robot);
        paths
            .iter()
            .map(|p| {
                let walk = p
                    .walk
                    .iter()
                    .map(|&c| d.require_index(c))
                    .collect::<Result<Vec<usize>>>()?;
                if walk.is_empty() {
                    return Err(Error::Instance(format!("robot {} has an empty walk", p.robot)));
                }
                if walk.len() > 1 {
                    let next = walk.iter().cycle().skip(1);
                    if let Some((&a, _)) = walk.iter().zip(next).find(|(&a, &b)| !d.are_adjacent(a, b)) {
                        return Err(Error::Instance(format!(
                            "robot {} walk leaves the graph at {}",
                            p.robot,
                            d.coord(a)
                        )));
                    }
                }
                Ok(CoveragePath::new(d, walk))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
