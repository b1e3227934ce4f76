//! Extended spanning tree coverage.
//!
//! A coverage walk for a connected set of subcells is produced in three
//! steps:
//!
//! 1. Build the augmented terrain graph: one node per covered cell, except
//!    that a cell holding only two diagonally opposite subcells becomes two
//!    nodes. Nodes are joined when some of their subcells touch. Edges
//!    between complete cells keep their terrain weight; every other edge gets
//!    `w_max * (w(a) + w(b)) / 2` so that incomplete cells end up as leaves.
//! 2. Take a minimum spanning tree, ties broken by `(weight, lo id, hi id)`
//!    with node ids in row-major order.
//! 3. Circumnavigate the tree. Every node starts with a closed local walk
//!    around its subcells (a 4-cycle for a complete cell, an out-and-back
//!    walk otherwise). Each tree edge then either swaps a pair of parallel
//!    side edges for the two crossing edges, which is the classic STC
//!    splice, or, when one side is missing, detours over a single crossing
//!    edge and back. The resulting multigraph is connected with all degrees
//!    even, and its Euler circuit from the root is the walk. With only
//!    complete cells every splice succeeds and the walk is a Hamiltonian
//!    cycle.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::grid::{DecomposedGraph, Quadrant, Side, VertexSet};

/// How edges of the augmented terrain graph are weighted before the
/// spanning tree is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeWeighting {
    /// Terrain weights, with incomplete endpoints pushed back by the
    /// manipulated weight.
    Prioritized,
    /// Every edge weighs 1; models weight-agnostic Full-STC.
    Uniform,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedNode {
    pub cell: usize,
    /// Member subcells of this node, ascending.
    pub subcells: Vec<usize>,
    /// All four subcells of the cell are members.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedTerrainGraph {
    nodes: Vec<AugmentedNode>,
    /// `(a, b, weight)` with `a < b`.
    edges: Vec<(usize, usize, f64)>,
    node_of: Vec<usize>,
}

impl AugmentedTerrainGraph {
    pub fn nodes(&self) -> &[AugmentedNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Node holding subcell `v`, if `v` is a member.
    pub fn node_of(&self, v: usize) -> Option<usize> {
        self.node_of.get(v).copied().filter(|&n| n != usize::MAX)
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .iter()
            .find(|&&(x, y, _)| x == lo && y == hi)
            .map(|e| e.2)
    }
}

/// Builds the augmented terrain graph of the subgraph induced by `members`.
pub fn build_augmented_terrain(
    d: &DecomposedGraph,
    members: &VertexSet,
    weighting: TreeWeighting,
) -> Result<AugmentedTerrainGraph> {
    check_members(d, members)?;
    if !d.is_connected(members) {
        let comps = d.components(members);
        return Err(Error::Disconnected(
            comps.iter().map(|c| d.coord(c[0])).collect(),
        ));
    }
    Ok(augment(d, members, weighting))
}

fn check_members(d: &DecomposedGraph, members: &VertexSet) -> Result<()> {
    if members.capacity() != d.len() {
        return Err(Error::InvalidParameter(
            "vertex set capacity does not match the decomposed graph".into(),
        ));
    }
    if members.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    if let Some(v) = members.iter().find(|&v| !d.is_present(v)) {
        return Err(Error::AbsentSubCell(d.coord(v)));
    }
    Ok(())
}

fn augment(d: &DecomposedGraph, members: &VertexSet, weighting: TreeWeighting) -> AugmentedTerrainGraph {
    let terrain = d.terrain();
    let mut nodes: Vec<AugmentedNode> = Vec::new();
    let mut node_of = vec![usize::MAX; d.len()];

    // Node ids follow row-major cell order; split halves by subcell index.
    for cell in terrain.present_cells() {
        let subs: Vec<usize> = d
            .subcells(cell)
            .into_iter()
            .filter(|&s| members.contains(s))
            .collect();
        if subs.is_empty() {
            continue;
        }
        let diagonal = subs.len() == 2 && !d.are_adjacent(subs[0], subs[1]);
        let groups: Vec<Vec<usize>> = if diagonal {
            vec![vec![subs[0]], vec![subs[1]]]
        } else {
            vec![subs]
        };
        for group in groups {
            let id = nodes.len();
            for &s in &group {
                node_of[s] = id;
            }
            nodes.push(AugmentedNode {
                cell,
                complete: group.len() == 4,
                subcells: group,
            });
        }
    }

    let w_max = terrain.max_edge_weight();
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        let cell = nodes[a].cell;
        for side in [Side::East, Side::South] {
            let Some(other) = terrain.neighbor(cell, side) else {
                continue;
            };
            let mut touching: Vec<usize> = Vec::new();
            for k in 0..2 {
                let sa = d.subcell(cell, side.quadrants()[k]);
                let sb = d.subcell(other, side.opposite().quadrants()[k]);
                if node_of[sa] == a && members.contains(sb) {
                    let b = node_of[sb];
                    if !touching.contains(&b) {
                        touching.push(b);
                    }
                }
            }
            for b in touching {
                let w = match weighting {
                    TreeWeighting::Uniform => 1.0,
                    TreeWeighting::Prioritized => {
                        if nodes[a].complete && nodes[b].complete {
                            terrain.edge_weight(cell, other).unwrap_or(0.0)
                        } else {
                            w_max * 0.5 * (d.cell_weight(cell) + d.cell_weight(other))
                        }
                    }
                };
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                edges.push((lo, hi, w));
            }
        }
    }
    edges.sort_by_key(|x| (x.0, x.1));
    AugmentedTerrainGraph {
        nodes,
        edges,
        node_of,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree {
    pub root: usize,
    /// Parent of each node, `None` for the root.
    pub parent: Vec<Option<usize>>,
    /// Tree edges `(parent, child)` in breadth-first order from the root.
    pub edges: Vec<(usize, usize)>,
    pub total_weight: f64,
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal's algorithm with deterministic tie-breaking, rooted at `root`.
pub fn minimum_spanning_tree(g: &AugmentedTerrainGraph, root: usize) -> Result<SpanningTree> {
    let n = g.num_nodes();
    if root >= n {
        return Err(Error::InvalidParameter(format!("root node {root} out of range")));
    }
    let mut sorted: Vec<(usize, usize, f64)> = g.edges.clone();
    sorted.sort_by(|x, y| x.2.total_cmp(&y.2).then((x.0, x.1).cmp(&(y.0, y.1))));

    let mut sets = DisjointSets::new(n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut total_weight = 0.0;
    let mut used = 0;
    for (a, b, w) in sorted {
        if sets.union(a, b) {
            adj[a].push(b);
            adj[b].push(a);
            total_weight += w;
            used += 1;
        }
    }
    if used + 1 != n {
        return Err(Error::InvalidParameter(
            "augmented terrain graph is disconnected".into(),
        ));
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                parent[b] = Some(a);
                edges.push((a, b));
                queue.push_back(b);
            }
        }
    }
    Ok(SpanningTree {
        root,
        parent,
        edges,
        total_weight,
    })
}

/// A closed walk on the decomposed graph, stored as a cyclic vertex sequence
/// that starts at the root. The closing step from the last vertex back to
/// the first is implied.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveragePath {
    vertices: Vec<usize>,
    cost: f64,
}

impl CoveragePath {
    pub fn new(d: &DecomposedGraph, vertices: Vec<usize>) -> Self {
        let cost = d.closed_walk_cost(&vertices);
        Self { vertices, cost }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn root(&self) -> usize {
        self.vertices[0]
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// Number of steps in the walk.
    pub fn num_edges(&self) -> usize {
        if self.vertices.len() < 2 {
            0
        } else {
            self.vertices.len()
        }
    }

    /// The walk with the root repeated at the end.
    pub fn closed(&self) -> impl Iterator<Item = usize> + '_ {
        let tail = (self.vertices.len() > 1).then(|| self.vertices[0]);
        self.vertices.iter().copied().chain(tail)
    }

    /// Steps `(from, to)` of the walk including the closing one.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.num_edges();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()]))
    }
}

/// Coverage walk for the subgraph induced by `members`, starting at `root`.
pub fn estc_path(d: &DecomposedGraph, members: &VertexSet, root: usize) -> Result<CoveragePath> {
    stc_walk(d, members, root, TreeWeighting::Prioritized)
}

/// Same walk construction on a spanning tree that ignores weights.
pub fn full_stc_path(d: &DecomposedGraph, members: &VertexSet, root: usize) -> Result<CoveragePath> {
    stc_walk(d, members, root, TreeWeighting::Uniform)
}

pub fn stc_walk(
    d: &DecomposedGraph,
    members: &VertexSet,
    root: usize,
    weighting: TreeWeighting,
) -> Result<CoveragePath> {
    check_members(d, members)?;
    if !members.contains(root) {
        return Err(Error::RootNotInSet(d.coord(root)));
    }
    let g = build_augmented_terrain(d, members, weighting)?;
    let root_node = g.node_of(root).expect("root is a member");
    let tree = minimum_spanning_tree(&g, root_node)?;
    let walk = circumnavigate(d, &g, &tree, root);
    Ok(CoveragePath::new(d, walk))
}

/// Multigraph on subcells whose Euler circuit is the coverage walk.
struct WalkGraph {
    ends: Vec<(usize, usize)>,
    alive: Vec<bool>,
    adj: std::collections::HashMap<usize, Vec<usize>>,
}

impl WalkGraph {
    fn new() -> Self {
        Self {
            ends: Vec::new(),
            alive: Vec::new(),
            adj: std::collections::HashMap::new(),
        }
    }

    fn add(&mut self, a: usize, b: usize) {
        let id = self.ends.len();
        self.ends.push((a, b));
        self.alive.push(true);
        self.adj.entry(a).or_default().push(id);
        self.adj.entry(b).or_default().push(id);
    }

    fn find(&self, a: usize, b: usize) -> Option<usize> {
        self.adj.get(&a)?.iter().copied().find(|&id| {
            let (x, y) = self.ends[id];
            self.alive[id] && ((x == a && y == b) || (x == b && y == a))
        })
    }

    fn other(&self, id: usize, v: usize) -> usize {
        let (x, y) = self.ends[id];
        if x == v {
            y
        } else {
            x
        }
    }
}

fn circumnavigate(
    d: &DecomposedGraph,
    g: &AugmentedTerrainGraph,
    tree: &SpanningTree,
    root: usize,
) -> Vec<usize> {
    let mut h = WalkGraph::new();
    for node in g.nodes() {
        add_local_walk(d, node, &mut h);
    }

    for &(a, b) in &tree.edges {
        let (na, nb) = (&g.nodes()[a], &g.nodes()[b]);
        let side = Side::ALL
            .into_iter()
            .find(|&s| d.terrain().step(na.cell, s) == Some(nb.cell))
            .expect("tree edges join neighbouring cells");
        let pairs: [(usize, usize); 2] = [0, 1].map(|k| {
            (
                d.subcell(na.cell, side.quadrants()[k]),
                d.subcell(nb.cell, side.opposite().quadrants()[k]),
            )
        });
        let in_a = |v: usize| na.subcells.contains(&v);
        let in_b = |v: usize| nb.subcells.contains(&v);

        let splice = if pairs.iter().all(|&(x, y)| in_a(x) && in_b(y)) {
            h.find(pairs[0].0, pairs[1].0)
                .zip(h.find(pairs[0].1, pairs[1].1))
        } else {
            None
        };
        match splice {
            Some((ea, eb)) => {
                h.alive[ea] = false;
                h.alive[eb] = false;
                h.add(pairs[0].0, pairs[0].1);
                h.add(pairs[1].0, pairs[1].1);
            }
            None => {
                let (x, y) = pairs
                    .iter()
                    .copied()
                    .filter(|&(x, y)| in_a(x) && in_b(y))
                    .min_by(|p, q| d.edge_weight(p.0, p.1).total_cmp(&d.edge_weight(q.0, q.1)))
                    .expect("adjacent nodes share a subcell contact");
                h.add(x, y);
                h.add(x, y);
            }
        }
    }

    euler_circuit(d, &mut h, root)
}

fn add_local_walk(d: &DecomposedGraph, node: &AugmentedNode, h: &mut WalkGraph) {
    let subs = &node.subcells;
    match subs.len() {
        4 => {
            let c = node.cell;
            let mut q = Quadrant::NW;
            for _ in 0..4 {
                h.add(d.subcell(c, q), d.subcell(c, q.ccw_next()));
                q = q.ccw_next();
            }
        }
        3 => {
            let corner = subs
                .iter()
                .copied()
                .find(|&s| subs.iter().filter(|&&t| d.are_adjacent(s, t)).count() == 2)
                .expect("three subcells of a cell form an L");
            for &t in subs.iter().filter(|&&t| t != corner) {
                h.add(corner, t);
                h.add(corner, t);
            }
        }
        2 => {
            h.add(subs[0], subs[1]);
            h.add(subs[0], subs[1]);
        }
        _ => {}
    }
}

fn euler_circuit(d: &DecomposedGraph, h: &mut WalkGraph, root: usize) -> Vec<usize> {
    if let Some(list) = h.adj.get_mut(&root) {
        // Leave the root counter-clockwise around its own cell, keeping the
        // spanning tree on the left.
        let cell = d.parent(root);
        let q = d.quadrant(root);
        let next = d.subcell(cell, q.ccw_next());
        let prev = d.subcell(cell, q.ccw_prev());
        let ends = &h.ends;
        let rank = |id: &usize| {
            let (x, y) = ends[*id];
            let o = if x == root { y } else { x };
            if o == next {
                0
            } else if o == prev {
                2
            } else {
                1
            }
        };
        list.sort_by_key(rank);
    }

    let mut cursor: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut stack = vec![root];
    let mut out = Vec::new();
    while let Some(&v) = stack.last() {
        let list = h.adj.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        let pos = cursor.entry(v).or_insert(0);
        while *pos < list.len() && !h.alive[list[*pos]] {
            *pos += 1;
        }
        if *pos < list.len() {
            let id = list[*pos];
            h.alive[id] = false;
            stack.push(h.other(id, v));
        } else {
            out.push(v);
            stack.pop();
        }
    }
    out.reverse();
    out.pop();
    if out.is_empty() {
        out.push(root);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SubCellCoord, TerrainCoord, TerrainGraph};

    fn all(d: &DecomposedGraph) -> VertexSet {
        d.vertex_set()
    }

    fn check_walk(d: &DecomposedGraph, set: &VertexSet, p: &CoveragePath, root: usize) {
        assert_eq!(p.root(), root);
        for (a, b) in p.steps() {
            assert!(d.are_adjacent(a, b), "step {a}->{b} is not an edge");
            assert!(set.contains(a) && set.contains(b));
        }
        let visited = VertexSet::from_indices(d.len(), p.vertices().iter().copied());
        assert_eq!(&visited, set);
    }

    #[test]
    fn single_cell_is_a_four_cycle() {
        let d = DecomposedGraph::build(&TerrainGraph::full(1, 1), &[]).unwrap();
        let p = estc_path(&d, &all(&d), 0).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.cost(), 0.0);
        // counter-clockwise from NW: NW, SW, SE, NE
        assert_eq!(p.vertices(), &[0, 2, 3, 1]);
        assert_eq!(full_stc_path(&d, &all(&d), 0).unwrap(), p);
    }

    #[test]
    fn two_cells_hamiltonian() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let set = all(&d);
        for root in d.vertices() {
            let p = estc_path(&d, &set, root).unwrap();
            check_walk(&d, &set, &p, root);
            assert_eq!(p.vertices().len(), 8);
            assert!((p.cost() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_walk_repeats_root() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 2), &[]).unwrap();
        let p = estc_path(&d, &all(&d), 5).unwrap();
        let closed: Vec<_> = p.closed().collect();
        assert_eq!(closed.first(), closed.last());
        assert_eq!(closed.len(), 17);
    }

    #[test]
    fn diagonal_cell_splits_into_two_nodes() {
        let g = TerrainGraph::full(1, 1);
        let d = DecomposedGraph::build_unchecked(&g, &[SubCellCoord::new(1, 0), SubCellCoord::new(0, 1)])
            .unwrap();
        let aug = augment(&d, &d.vertex_set(), TreeWeighting::Prioritized);
        assert_eq!(aug.num_nodes(), 2);
        assert!(aug.edges().is_empty());
        assert!(build_augmented_terrain(&d, &d.vertex_set(), TreeWeighting::Prioritized).is_err());
    }

    #[test]
    fn complete_graph_keeps_terrain_weights() {
        let mut g = TerrainGraph::full(3, 1);
        g.set_edge_weight(TerrainCoord::new(0, 0), TerrainCoord::new(1, 0), 2.0).unwrap();
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        let aug = build_augmented_terrain(&d, &all(&d), TreeWeighting::Prioritized).unwrap();
        assert_eq!(aug.num_nodes(), 3);
        assert_eq!(aug.edges(), &[(0, 1, 2.0), (1, 2, 1.0)]);
    }

    #[test]
    fn manipulated_weight_for_incomplete_endpoint() {
        // 3x3 uniform grid, centre cell (degree 4) east neighbour made
        // incomplete; the east middle cell has degree 3 though, so use a 4x3
        // grid where cells (1,1) and (2,1) both have degree 4.
        let g = TerrainGraph::full(4, 3);
        let d = DecomposedGraph::build(&g, &[SubCellCoord::new(5, 3)]).unwrap();
        let aug = build_augmented_terrain(&d, &all(&d), TreeWeighting::Prioritized).unwrap();
        let a = aug.node_of(d.index(SubCellCoord::new(2, 2)).unwrap()).unwrap();
        let b = aug.node_of(d.index(SubCellCoord::new(4, 2)).unwrap()).unwrap();
        assert_eq!(aug.edge_weight(a, b), Some(4.0));
        let c = aug.node_of(d.index(SubCellCoord::new(0, 2)).unwrap()).unwrap();
        assert_eq!(aug.edge_weight(c, a), Some(1.0));
    }

    #[test]
    fn mst_examples() {
        let d = DecomposedGraph::build(&TerrainGraph::full(1, 1), &[]).unwrap();
        let aug = build_augmented_terrain(&d, &all(&d), TreeWeighting::Prioritized).unwrap();
        let t = minimum_spanning_tree(&aug, 0).unwrap();
        assert_eq!(t.total_weight, 0.0);
        assert!(t.edges.is_empty());

        let mut g = TerrainGraph::full(3, 1);
        g.set_edge_weight(TerrainCoord::new(1, 0), TerrainCoord::new(2, 0), 2.0).unwrap();
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        let aug = build_augmented_terrain(&d, &all(&d), TreeWeighting::Prioritized).unwrap();
        let t = minimum_spanning_tree(&aug, 0).unwrap();
        assert_eq!(t.total_weight, 3.0);
        assert_eq!(t.edges.len(), 2);

        // 4-cycle of cells with weights 1, 1, 1, 5
        let mut g = TerrainGraph::full(2, 2);
        let c = TerrainCoord::new;
        g.set_edge_weight(c(0, 0), c(0, 1), 5.0).unwrap();
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        let aug = build_augmented_terrain(&d, &all(&d), TreeWeighting::Prioritized).unwrap();
        let t = minimum_spanning_tree(&aug, 0).unwrap();
        assert_eq!(t.total_weight, 3.0);
        assert!(!t.edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (0, 2)));
    }

    #[test]
    fn l_shaped_cell_is_covered() {
        let g = TerrainGraph::full(2, 1);
        let d = DecomposedGraph::build(&g, &[SubCellCoord::new(3, 0)]).unwrap();
        let set = all(&d);
        for root in d.vertices() {
            let p = estc_path(&d, &set, root).unwrap();
            check_walk(&d, &set, &p, root);
            assert_eq!(p.vertices().len(), 8);
        }
    }

    #[test]
    fn root_must_be_member() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let set = VertexSet::from_indices(d.len(), [0, 1]);
        assert!(matches!(estc_path(&d, &set, 2), Err(Error::RootNotInSet(_))));
        let split = VertexSet::from_indices(d.len(), [0, 3]);
        assert!(matches!(estc_path(&d, &split, 0), Err(Error::Disconnected(_))));
    }

    #[test]
    fn single_and_pair_walks() {
        let d = DecomposedGraph::build(&TerrainGraph::full(1, 1), &[]).unwrap();
        let one = VertexSet::from_indices(d.len(), [3]);
        let p = estc_path(&d, &one, 3).unwrap();
        assert_eq!(p.vertices(), &[3]);
        assert_eq!(p.num_edges(), 0);
        let two = VertexSet::from_indices(d.len(), [0, 1]);
        let p = estc_path(&d, &two, 1).unwrap();
        assert_eq!(p.vertices(), &[1, 0]);
        assert_eq!(p.num_edges(), 2);
    }
}
