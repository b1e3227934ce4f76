//! Random instances and random removal of subcells.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{DecomposedGraph, SubCellCoord, TerrainGraph, VertexSet};
use crate::io::instance::{Instance, ParamOverrides};

/// Attempts per terrain cell before a removal is given up.
pub const MAX_REMOVAL_TRIES: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub width: usize,
    pub height: usize,
    /// Fraction of terrain cells turned into obstacles.
    pub obstacle_fraction: f64,
    /// Fraction of terrain cells that lose subcells.
    pub incomplete_fraction: f64,
    pub robots: usize,
    /// Random edge weights in [1, 10] instead of uniform weights.
    pub weighted: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            width: 10,
            height: 10,
            obstacle_fraction: 0.1,
            incomplete_fraction: 0.0,
            robots: 4,
            weighted: false,
        }
    }
}

fn check_fraction(name: &str, f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} {f} outside [0, 1]")))
    }
}

fn terrain_connected(g: &TerrainGraph) -> bool {
    let cells = VertexSet::from_indices(g.len(), g.present_cells());
    crate::grid::connected_components(&cells, |v| g.neighbors(v).collect::<Vec<_>>()).len() == 1
}

/// Random connected terrain with obstacles; weights are uniform or drawn
/// from [1, 10] rounded to two decimals.
pub fn random_terrain(width: usize, height: usize, obstacle_fraction: f64, weighted: bool, rng: &mut impl Rng) -> Result<TerrainGraph> {
    check_fraction("obstacle fraction", obstacle_fraction)?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter("terrain must have positive size".into()));
    }
    let n = width * height;
    let target = ((obstacle_fraction * n as f64).round() as usize).min(n - 1);
    let mut present = vec![true; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut placed = 0;
    for cell in order {
        if placed == target {
            break;
        }
        present[cell] = false;
        if terrain_connected(&TerrainGraph::new(width, height, present.clone())?) {
            placed += 1;
        } else {
            present[cell] = true;
        }
    }
    let mut g = TerrainGraph::new(width, height, present)?;
    if weighted {
        let edges: Vec<(usize, usize)> = g.edges().map(|(a, b, _)| (a, b)).collect();
        for (a, b) in edges {
            let w = (rng.gen_range(1.0..=10.0_f64) * 100.0).round() / 100.0;
            g.set_edge_weight(g.coord(a), g.coord(b), w)?;
        }
    }
    Ok(g)
}

/// Removes 1–3 random subcells from each of ⌈fraction·|V_g|⌉ random terrain
/// cells, never disconnecting the graph.
pub fn make_incomplete(d: &DecomposedGraph, fraction: f64, rng: &mut impl Rng) -> Result<DecomposedGraph> {
    make_incomplete_protected(d, fraction, &[], rng)
}

/// As [`make_incomplete`], keeping the `protected` subcells.
pub fn make_incomplete_protected(
    d: &DecomposedGraph,
    fraction: f64,
    protected: &[usize],
    rng: &mut impl Rng,
) -> Result<DecomposedGraph> {
    check_fraction("incompleteness fraction", fraction)?;
    let cells: Vec<usize> = d.terrain().present_cells().collect();
    let count = ((fraction * cells.len() as f64).ceil() as usize).min(cells.len());
    let chosen: Vec<usize> = cells.choose_multiple(rng, count).copied().collect();
    let mut out = d.clone();
    for cell in chosen {
        let present: Vec<usize> = out.present_subcells(cell).collect();
        let candidates: Vec<usize> = present.iter().copied().filter(|v| !protected.contains(v)).collect();
        for _ in 0..MAX_REMOVAL_TRIES {
            let r = rng.gen_range(1..=3usize).min(candidates.len()).min(present.len().saturating_sub(1));
            if r == 0 {
                break;
            }
            let removed: Vec<usize> = candidates.choose_multiple(rng, r).copied().collect();
            let next = out.without(removed);
            if next.is_connected(&next.vertex_set()) {
                out = next;
                break;
            }
        }
    }
    Ok(out)
}

/// Distinct random root subcells.
pub fn random_roots(d: &DecomposedGraph, k: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let verts: Vec<usize> = d.vertices().collect();
    if k == 0 || k > verts.len() {
        return Err(Error::InvalidParameter(format!("cannot place {k} roots on {} subcells", verts.len())));
    }
    let mut roots: Vec<usize> = verts.choose_multiple(rng, k).copied().collect();
    roots.sort_unstable();
    Ok(roots)
}

/// Random instance per `cfg`; roots are drawn before the corruption and
/// kept present.
pub fn random_instance(name: &str, cfg: &GeneratorConfig, rng: &mut impl Rng) -> Result<Instance> {
    let g = random_terrain(cfg.width, cfg.height, cfg.obstacle_fraction, cfg.weighted, rng)?;
    let full = DecomposedGraph::build(&g, &[])?;
    let roots = random_roots(&full, cfg.robots, rng)?;
    let d = make_incomplete_protected(&full, cfg.incomplete_fraction, &roots, rng)?;
    let blocked: Vec<SubCellCoord> = g
        .present_cells()
        .flat_map(|c| d.subcells(c))
        .filter(|&v| !d.is_present(v))
        .map(|v| d.coord(v))
        .collect();
    let root_coords: Vec<SubCellCoord> = roots.iter().map(|&r| d.coord(r)).collect();
    Instance::new(name, g, blocked, &root_coords, ParamOverrides::default())
}
