//! Initial partitions: a Voronoi split of the decomposed graph and a greedy
//! rooted tree cover over the augmented terrain graph.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estc::{build_augmented_terrain, TreeWeighting};
use crate::grid::{DecomposedGraph, VertexSet};
use crate::partition::Partition;
use crate::search::Solution;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InitMethod {
    Voronoi,
    #[default]
    Greedy,
}

impl FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vor" | "voronoi" => Ok(Self::Voronoi),
            "greedy" => Ok(Self::Greedy),
            other => Err(Error::InvalidParameter(format!("unknown initializer '{other}'"))),
        }
    }
}

impl fmt::Display for InitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Voronoi => "vor",
            Self::Greedy => "greedy",
        })
    }
}

fn check_roots(d: &DecomposedGraph, roots: &[usize]) -> Result<()> {
    if roots.is_empty() {
        return Err(Error::InvalidParameter("at least one root is required".into()));
    }
    for (i, &r) in roots.iter().enumerate() {
        if r >= d.len() || !d.is_present(r) {
            return Err(Error::InvalidParameter(format!("root {i} is not a vertex of the graph")));
        }
        if roots[..i].contains(&r) {
            return Err(Error::DuplicateRoot(d.coord(r)));
        }
    }
    Ok(())
}

#[derive(PartialEq)]
struct Label {
    dist: f64,
    robot: usize,
    vertex: usize,
}

impl Eq for Label {}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.robot.cmp(&other.robot))
            .then(self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Assigns each vertex to its nearest root by shortest-path distance,
/// breaking ties toward the lower robot index. Each cell grows along a
/// shortest-path forest, so every subgraph is connected.
pub fn voronoi_partition(d: &DecomposedGraph, roots: &[usize]) -> Result<Partition> {
    check_roots(d, roots)?;
    d.require_connected()?;
    let mut owner = vec![usize::MAX; d.len()];
    for (i, &r) in roots.iter().enumerate() {
        owner[r] = i;
    }
    let mut settled = vec![false; d.len()];
    let mut heap: BinaryHeap<Reverse<Label>> = roots
        .iter()
        .enumerate()
        .map(|(robot, &vertex)| Reverse(Label { dist: 0.0, robot, vertex }))
        .collect();
    while let Some(Reverse(Label { dist, robot, vertex })) = heap.pop() {
        if settled[vertex] || (owner[vertex] != usize::MAX && owner[vertex] != robot) {
            continue;
        }
        settled[vertex] = true;
        owner[vertex] = robot;
        for u in d.neighbors(vertex) {
            if !settled[u] {
                heap.push(Reverse(Label {
                    dist: dist + d.edge_weight(vertex, u),
                    robot,
                    vertex: u,
                }));
            }
        }
    }
    let sets = (0..roots.len())
        .map(|i| VertexSet::from_indices(d.len(), d.vertices().filter(|&v| owner[v] == i)))
        .collect();
    Partition::new(d, roots.to_vec(), sets)
}

/// Greedy rooted tree cover: the currently lightest tree repeatedly absorbs
/// its cheapest uncovered neighbouring node of the augmented terrain graph.
pub fn greedy_tree_cover_init(d: &DecomposedGraph, roots: &[usize]) -> Result<Partition> {
    check_roots(d, roots)?;
    let g = build_augmented_terrain(d, &d.vertex_set(), TreeWeighting::Prioritized)?;
    let n = g.num_nodes();
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let node_weight = |a: usize| {
        let node = &g.nodes()[a];
        d.cell_weight(node.cell) * node.subcells.len() as f64 / 4.0
    };

    let k = roots.len();
    let mut covered = vec![false; n];
    let mut trees: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut load = vec![0.0; k];
    for (i, &r) in roots.iter().enumerate() {
        let a = g.node_of(r).expect("root is a member");
        load[i] = node_weight(a);
        covered[a] = true;
        trees.push(vec![a]);
    }
    let mut remaining = covered.iter().filter(|&&c| !c).count();
    while remaining > 0 {
        let frontier = |i: usize| -> Option<usize> {
            trees[i]
                .iter()
                .flat_map(|&a| adj[a].iter().copied())
                .filter(|&b| !covered[b])
                .min_by(|&x, &y| node_weight(x).total_cmp(&node_weight(y)).then(x.cmp(&y)))
        };
        let choice = (0..k)
            .filter_map(|i| frontier(i).map(|b| (i, b)))
            .min_by(|&(i, _), &(j, _)| load[i].total_cmp(&load[j]).then(i.cmp(&j)));
        let Some((i, b)) = choice else {
            return Err(Error::InvalidPartition("tree cover stalled on a disconnected graph".into()));
        };
        covered[b] = true;
        load[i] += node_weight(b);
        trees[i].push(b);
        remaining -= 1;
    }
    let sets = trees
        .iter()
        .map(|nodes| {
            VertexSet::from_indices(
                d.len(),
                nodes.iter().flat_map(|&a| g.nodes()[a].subcells.iter().copied()),
            )
        })
        .collect();
    Partition::new(d, roots.to_vec(), sets)
}

/// Initial partition planned with ESTC for every robot.
pub fn initial_solution(d: &DecomposedGraph, roots: &[usize], method: InitMethod) -> Result<Solution> {
    let partition = match method {
        InitMethod::Voronoi => voronoi_partition(d, roots)?,
        InitMethod::Greedy => greedy_tree_cover_init(d, roots)?,
    };
    Solution::from_partition(d, partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SubCellCoord, TerrainGraph};

    fn at(d: &DecomposedGraph, c: usize, r: usize) -> usize {
        d.index(SubCellCoord::new(c, r)).unwrap()
    }

    #[test]
    fn voronoi_splits_between_opposite_roots() {
        // (2,0) and (1,1) lie two steps from both roots
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let p = voronoi_partition(&d, &[at(&d, 0, 0), at(&d, 3, 1)]).unwrap();
        assert_eq!(p.set(0).len(), 5);
        assert_eq!(p.set(1).len(), 3);
        assert!(p.set(0).contains(at(&d, 2, 0)) && p.set(0).contains(at(&d, 1, 1)));
        assert!(p.duplicated().is_empty());
    }

    #[test]
    fn voronoi_symmetric_roots_split_evenly() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let p = voronoi_partition(&d, &[at(&d, 0, 0), at(&d, 3, 0)]).unwrap();
        assert_eq!(p.set(0).len(), 4);
        assert_eq!(p.set(1).len(), 4);
        let one = voronoi_partition(&d, &[at(&d, 2, 1)]).unwrap();
        assert_eq!(one.set(0), &d.vertex_set());
    }

    #[test]
    fn voronoi_ties_go_to_lower_robot() {
        // (1,0) and (0,1) are equidistant from both roots on a 2x2 block
        let d = DecomposedGraph::build(&TerrainGraph::full(1, 1), &[]).unwrap();
        let p = voronoi_partition(&d, &[at(&d, 0, 0), at(&d, 1, 1)]).unwrap();
        assert_eq!(p.set(0).len(), 3);
        assert_eq!(p.set(1).len(), 1);
    }

    #[test]
    fn duplicate_roots_rejected() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        assert!(matches!(voronoi_partition(&d, &[0, 0]), Err(Error::DuplicateRoot(_))));
        assert!(matches!(greedy_tree_cover_init(&d, &[0, 0]), Err(Error::DuplicateRoot(_))));
        assert!(voronoi_partition(&d, &[]).is_err());
    }

    #[test]
    fn greedy_opposite_corners_of_square() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 2), &[]).unwrap();
        let p = greedy_tree_cover_init(&d, &[at(&d, 0, 0), at(&d, 3, 3)]).unwrap();
        assert_eq!(p.set(0).len(), 8);
        assert_eq!(p.set(1).len(), 8);
        let one = greedy_tree_cover_init(&d, &[at(&d, 3, 3)]).unwrap();
        assert_eq!(one.set(0), &d.vertex_set());
    }

    #[test]
    fn greedy_one_root_per_cell() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 2), &[]).unwrap();
        let roots: Vec<usize> = (0..6).map(|c| d.subcell(c, crate::grid::Quadrant::SE)).collect();
        let p = greedy_tree_cover_init(&d, &roots).unwrap();
        for (i, c) in (0..6).enumerate() {
            assert_eq!(p.set(i), &VertexSet::from_indices(d.len(), d.subcells(c)));
        }
    }

    #[test]
    fn greedy_balances_a_strip() {
        let d = DecomposedGraph::build(&TerrainGraph::full(6, 1), &[]).unwrap();
        let p = greedy_tree_cover_init(&d, &[at(&d, 0, 0), at(&d, 11, 1)]).unwrap();
        assert_eq!(p.set(0).len(), 12);
        assert_eq!(p.set(1).len(), 12);
    }

    #[test]
    fn greedy_shares_the_node_of_co_located_roots() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 1), &[]).unwrap();
        let p = greedy_tree_cover_init(&d, &[at(&d, 0, 0), at(&d, 1, 1)]).unwrap();
        let west = VertexSet::from_indices(d.len(), d.subcells(0));
        for i in 0..2 {
            assert!(west.iter().all(|v| p.set(i).contains(v)));
        }
        assert_eq!(p.duplicated().len(), 4);
    }

    #[test]
    fn initial_solutions_validate() {
        let mut g = TerrainGraph::full(4, 4);
        g.set_edge_weight(crate::grid::TerrainCoord::new(1, 1), crate::grid::TerrainCoord::new(2, 1), 5.0)
            .unwrap();
        let blocked = [SubCellCoord::new(3, 3), SubCellCoord::new(4, 5)];
        let d = DecomposedGraph::build(&g, &blocked).unwrap();
        let roots = [at(&d, 0, 0), at(&d, 7, 7), at(&d, 7, 0)];
        for method in [InitMethod::Voronoi, InitMethod::Greedy] {
            let s = initial_solution(&d, &roots, method).unwrap();
            s.validate(&d).unwrap();
        }
    }

    #[test]
    fn init_method_parsing() {
        assert_eq!("vor".parse::<InitMethod>().unwrap(), InitMethod::Voronoi);
        assert_eq!("greedy".parse::<InitMethod>().unwrap(), InitMethod::Greedy);
        assert!("mfc".parse::<InitMethod>().is_err());
        assert_eq!(InitMethod::Voronoi.to_string(), "vor");
    }
}
