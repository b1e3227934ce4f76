//! Terrain and decomposed grid graphs.
//!
//! A terrain graph is a 4-connected grid of cells with weighted edges between
//! horizontally or vertically adjacent present cells. Each terrain cell
//! `(x, y)` is split into four subcells `(2x + dx, 2y + dy)` on a grid of
//! twice the resolution; the subcells that are not blocked form the
//! decomposed graph on which coverage walks live.
//!
//! Coordinates are `(col, row)` with the origin in the top-left corner.
//! Vertices are addressed internally by their row-major index, so ordering by
//! index is the same as ordering by coordinate (row first, then column).

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for floating point comparisons that steer control flow.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TerrainCoord {
    pub col: usize,
    pub row: usize,
}

impl TerrainCoord {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    pub fn subcell(self, quadrant: Quadrant) -> SubCellCoord {
        let (dx, dy) = quadrant.offset();
        SubCellCoord::new(2 * self.col + dx, 2 * self.row + dy)
    }
}

impl Ord for TerrainCoord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

impl PartialOrd for TerrainCoord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TerrainCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubCellCoord {
    pub col: usize,
    pub row: usize,
}

impl SubCellCoord {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    pub const fn parent(self) -> TerrainCoord {
        TerrainCoord::new(self.col / 2, self.row / 2)
    }

    pub const fn quadrant(self) -> Quadrant {
        Quadrant::from_offset(self.col % 2, self.row % 2)
    }
}

impl Ord for SubCellCoord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

impl PartialOrd for SubCellCoord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubCellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

/// Position of a subcell inside its terrain cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    NW = 0,
    NE = 1,
    SW = 2,
    SE = 3,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::NW, Quadrant::NE, Quadrant::SW, Quadrant::SE];

    pub const fn offset(self) -> (usize, usize) {
        match self {
            Quadrant::NW => (0, 0),
            Quadrant::NE => (1, 0),
            Quadrant::SW => (0, 1),
            Quadrant::SE => (1, 1),
        }
    }

    pub const fn from_offset(dx: usize, dy: usize) -> Self {
        match (dx, dy) {
            (0, 0) => Quadrant::NW,
            (1, 0) => Quadrant::NE,
            (0, 1) => Quadrant::SW,
            _ => Quadrant::SE,
        }
    }

    /// Successor when walking counter-clockwise on screen (NW, SW, SE, NE),
    /// which keeps the cell centre on the walker's left.
    pub const fn ccw_next(self) -> Self {
        match self {
            Quadrant::NW => Quadrant::SW,
            Quadrant::SW => Quadrant::SE,
            Quadrant::SE => Quadrant::NE,
            Quadrant::NE => Quadrant::NW,
        }
    }

    pub const fn ccw_prev(self) -> Self {
        match self {
            Quadrant::NW => Quadrant::NE,
            Quadrant::NE => Quadrant::SE,
            Quadrant::SE => Quadrant::SW,
            Quadrant::SW => Quadrant::NW,
        }
    }
}

/// The four sides of a cell, also used as directions to neighbouring cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    North,
    South,
    West,
    East,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::South, Side::West, Side::East];

    pub const fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::South => Side::North,
            Side::West => Side::East,
            Side::East => Side::West,
        }
    }

    /// The two quadrants lying along this side, in a fixed order such that
    /// `side.quadrants()[k]` is adjacent to `side.opposite().quadrants()[k]`
    /// of the neighbouring cell.
    pub const fn quadrants(self) -> [Quadrant; 2] {
        match self {
            Side::North => [Quadrant::NW, Quadrant::NE],
            Side::South => [Quadrant::SW, Quadrant::SE],
            Side::West => [Quadrant::NW, Quadrant::SW],
            Side::East => [Quadrant::NE, Quadrant::SE],
        }
    }

    /// The two sides perpendicular to this one.
    pub const fn perpendicular(self) -> [Side; 2] {
        match self {
            Side::North | Side::South => [Side::West, Side::East],
            Side::West | Side::East => [Side::North, Side::South],
        }
    }

    fn delta(self) -> (isize, isize) {
        match self {
            Side::North => (0, -1),
            Side::South => (0, 1),
            Side::West => (-1, 0),
            Side::East => (1, 0),
        }
    }
}

/// Side of a cell occupied by two distinct, adjacent quadrants.
pub fn side_of_pair(a: Quadrant, b: Quadrant) -> Option<Side> {
    Side::ALL.into_iter().find(|s| {
        let q = s.quadrants();
        (q[0] == a && q[1] == b) || (q[0] == b && q[1] == a)
    })
}

/// Index-addressed set of vertices with O(1) membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            bits: vec![false; capacity],
            len: 0,
        }
    }

    pub fn from_indices(capacity: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::new(capacity);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        if self.bits[v] {
            return false;
        }
        self.bits[v] = true;
        self.len += 1;
        true
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if !self.bits[v] {
            return false;
        }
        self.bits[v] = false;
        self.len -= 1;
        true
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

/// Splits `set` into maximal connected components. Components are sorted
/// internally and ordered by their smallest member.
pub fn connected_components<N, I>(set: &VertexSet, mut neighbors: N) -> Vec<Vec<usize>>
where
    N: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; set.capacity()];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in set.iter() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for w in neighbors(v) {
                if set.contains(w) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Weighted 4-connected grid graph of terrain cells.
#[derive(Clone, Debug, PartialEq)]
pub struct TerrainGraph {
    width: usize,
    height: usize,
    present: Vec<bool>,
    // Weight of the edge from cell i to its east / south neighbour.
    // Only meaningful when both endpoints are present.
    east: Vec<f64>,
    south: Vec<f64>,
}

impl TerrainGraph {
    /// Builds a terrain graph with every edge weighted 1.0.
    pub fn new(width: usize, height: usize, present: Vec<bool>) -> Result<Self> {
        if present.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "presence mask has {} entries, expected {}x{}",
                present.len(),
                width,
                height
            )));
        }
        let n = width * height;
        Ok(Self {
            width,
            height,
            present,
            east: vec![1.0; n],
            south: vec![1.0; n],
        })
    }

    /// Fully present `width x height` grid with uniform unit weights.
    pub fn full(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![true; width * height]).expect("mask size matches")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of cell slots (present or not).
    pub fn len(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    pub fn index(&self, c: TerrainCoord) -> Option<usize> {
        (c.col < self.width && c.row < self.height).then(|| c.row * self.width + c.col)
    }

    pub fn coord(&self, i: usize) -> TerrainCoord {
        TerrainCoord::new(i % self.width, i / self.width)
    }

    #[inline]
    pub fn is_present(&self, i: usize) -> bool {
        self.present[i]
    }

    pub fn contains(&self, c: TerrainCoord) -> bool {
        self.index(c).is_some_and(|i| self.present[i])
    }

    pub fn present_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.present[i])
    }

    /// Neighbouring cell slot on `side`, present or not.
    pub fn step(&self, i: usize, side: Side) -> Option<usize> {
        let (dx, dy) = side.delta();
        let c = self.coord(i);
        let col = c.col.checked_add_signed(dx)?;
        let row = c.row.checked_add_signed(dy)?;
        self.index(TerrainCoord::new(col, row))
    }

    /// Present neighbour of a present cell on `side`.
    pub fn neighbor(&self, i: usize, side: Side) -> Option<usize> {
        self.step(i, side).filter(|&j| self.present[j])
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        Side::ALL
            .into_iter()
            .filter_map(move |s| self.neighbor(i, s))
    }

    /// Weight of the edge between two present, 4-adjacent cells.
    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        if !(self.present[a] && self.present[b]) {
            return None;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi == lo + 1 && lo % self.width + 1 < self.width {
            Some(self.east[lo])
        } else if hi == lo + self.width {
            Some(self.south[lo])
        } else {
            None
        }
    }

    pub fn set_edge_weight(&mut self, a: TerrainCoord, b: TerrainCoord, w: f64) -> Result<()> {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight(w));
        }
        let (ia, ib) = match (self.index(a), self.index(b)) {
            (Some(ia), Some(ib)) if self.present[ia] && self.present[ib] => (ia, ib),
            _ => return Err(Error::NotAnEdge(a, b)),
        };
        let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
        if hi == lo + 1 && lo % self.width + 1 < self.width {
            self.east[lo] = w;
        } else if hi == lo + self.width {
            self.south[lo] = w;
        } else {
            return Err(Error::NotAnEdge(a, b));
        }
        Ok(())
    }

    /// All edges `(a, b, w)` with `a < b`, in row-major order of `a`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.present_cells().flat_map(move |i| {
            let e = self
                .neighbor(i, Side::East)
                .map(|j| (i, j, self.east[i]));
            let s = self
                .neighbor(i, Side::South)
                .map(|j| (i, j, self.south[i]));
            e.into_iter().chain(s)
        })
    }

    /// Sum of the weights of all edges incident to the cell.
    pub fn vertex_weight(&self, c: TerrainCoord) -> Result<f64> {
        match self.index(c) {
            Some(i) if self.present[i] => Ok(self.vertex_weight_at(i)),
            _ => Err(Error::AbsentTerrainVertex(c)),
        }
    }

    pub(crate) fn vertex_weight_at(&self, i: usize) -> f64 {
        self.neighbors(i)
            .map(|j| self.edge_weight(i, j).unwrap_or(0.0))
            .sum()
    }

    /// Largest edge weight, 0 for an edgeless graph.
    pub fn max_edge_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).fold(0.0, f64::max)
    }
}

/// The twice-resolution grid graph on which coverage walks are planned.
///
/// Every edge `(u, v)` weighs `(w(parent u) + w(parent v)) / 8` where `w` is
/// the terrain vertex weight.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposedGraph {
    terrain: TerrainGraph,
    present: Vec<bool>,
    cell_weight: Vec<f64>,
}

impl DecomposedGraph {
    /// Builds the decomposed graph and requires it to be connected.
    pub fn build(g: &TerrainGraph, blocked: &[SubCellCoord]) -> Result<Self> {
        let d = Self::build_unchecked(g, blocked)?;
        d.require_connected()?;
        Ok(d)
    }

    /// Builds the decomposed graph without the connectivity requirement.
    pub fn build_unchecked(g: &TerrainGraph, blocked: &[SubCellCoord]) -> Result<Self> {
        if g.num_vertices() == 0 {
            return Err(Error::Instance("terrain graph has no vertices".into()));
        }
        let w2 = 2 * g.width();
        let mut present = vec![false; w2 * 2 * g.height()];
        for cell in g.present_cells() {
            let c = g.coord(cell);
            for q in Quadrant::ALL {
                let s = c.subcell(q);
                present[s.row * w2 + s.col] = true;
            }
        }
        for &b in blocked {
            if !g.contains(b.parent()) {
                return Err(Error::AbsentTerrainVertex(b.parent()));
            }
            present[b.row * w2 + b.col] = false;
        }
        Ok(Self::from_parts(g.clone(), present))
    }

    pub(crate) fn from_parts(terrain: TerrainGraph, present: Vec<bool>) -> Self {
        let cell_weight = (0..terrain.len())
            .map(|i| {
                if terrain.is_present(i) {
                    terrain.vertex_weight_at(i)
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            terrain,
            present,
            cell_weight,
        }
    }

    /// Copy of this graph with the given subcells removed.
    pub fn without(&self, removed: impl IntoIterator<Item = usize>) -> Self {
        let mut out = self.clone();
        for v in removed {
            out.present[v] = false;
        }
        out
    }

    pub fn require_connected(&self) -> Result<()> {
        let comps = self.components(&self.vertex_set());
        match comps.len() {
            0 => Err(Error::Instance("decomposed graph has no vertices".into())),
            1 => Ok(()),
            _ => Err(Error::Disconnected(
                comps.iter().map(|c| self.coord(c[0])).collect(),
            )),
        }
    }

    pub fn terrain(&self) -> &TerrainGraph {
        &self.terrain
    }

    /// Width of the subcell grid.
    pub fn width(&self) -> usize {
        2 * self.terrain.width()
    }

    pub fn height(&self) -> usize {
        2 * self.terrain.height()
    }

    /// Number of subcell slots; valid vertex indices are below this.
    pub fn len(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn num_edges(&self) -> usize {
        self.vertices()
            .map(|v| self.neighbors(v).filter(|&w| w > v).count())
            .sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.present[v])
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_indices(self.len(), self.vertices())
    }

    #[inline]
    pub fn is_present(&self, v: usize) -> bool {
        self.present[v]
    }

    /// Index of a present subcell.
    pub fn index(&self, s: SubCellCoord) -> Option<usize> {
        if s.col >= self.width() || s.row >= self.height() {
            return None;
        }
        let v = s.row * self.width() + s.col;
        self.present[v].then_some(v)
    }

    pub fn require_index(&self, s: SubCellCoord) -> Result<usize> {
        self.index(s).ok_or(Error::AbsentSubCell(s))
    }

    pub fn coord(&self, v: usize) -> SubCellCoord {
        SubCellCoord::new(v % self.width(), v / self.width())
    }

    /// Terrain cell index of a subcell.
    #[inline]
    pub fn parent(&self, v: usize) -> usize {
        let w = self.width();
        (v / w / 2) * self.terrain.width() + (v % w) / 2
    }

    #[inline]
    pub fn quadrant(&self, v: usize) -> Quadrant {
        let w = self.width();
        Quadrant::from_offset(v % w % 2, v / w % 2)
    }

    /// Subcell slot of `cell` at `q` (present or not).
    #[inline]
    pub fn subcell(&self, cell: usize, q: Quadrant) -> usize {
        let (dx, dy) = q.offset();
        let tw = self.terrain.width();
        let (cx, cy) = (cell % tw, cell / tw);
        (2 * cy + dy) * self.width() + 2 * cx + dx
    }

    pub fn subcells(&self, cell: usize) -> [usize; 4] {
        Quadrant::ALL.map(|q| self.subcell(cell, q))
    }

    pub fn present_subcells(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.subcells(cell)
            .into_iter()
            .filter(move |&v| self.present[v])
    }

    /// Present 4-neighbours of a subcell.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let w = self.width();
        let h = self.height();
        let (x, y) = (v % w, v / w);
        let cand = [
            (y > 0).then(|| v - w),
            (x > 0).then(|| v - 1),
            (x + 1 < w).then(|| v + 1),
            (y + 1 < h).then(|| v + w),
        ];
        cand.into_iter()
            .flatten()
            .filter(move |&u| self.present[u])
    }

    #[inline]
    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        if !(self.present[u] && self.present[v]) {
            return false;
        }
        let w = self.width();
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        (hi == lo + 1 && lo % w + 1 < w) || hi == lo + w
    }

    /// Weight of the edge between two adjacent subcells.
    #[inline]
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        (self.cell_weight[self.parent(u)] + self.cell_weight[self.parent(v)]) / 8.0
    }

    /// Terrain vertex weight `w_δ` of a cell.
    pub fn cell_weight(&self, cell: usize) -> f64 {
        self.cell_weight[cell]
    }

    pub fn is_complete(&self, cell: usize) -> bool {
        self.terrain.is_present(cell) && self.subcells(cell).iter().all(|&v| self.present[v])
    }

    pub fn is_complete_at(&self, c: TerrainCoord) -> Result<bool> {
        match self.terrain.index(c) {
            Some(i) if self.terrain.is_present(i) => Ok(self.is_complete(i)),
            _ => Err(Error::AbsentTerrainVertex(c)),
        }
    }

    pub fn is_complete_graph(&self) -> bool {
        self.terrain.present_cells().all(|c| self.is_complete(c))
    }

    pub fn components(&self, set: &VertexSet) -> Vec<Vec<usize>> {
        connected_components(set, |v| self.neighbors(v))
    }

    /// Whether the subgraph induced by `set` is connected (and nonempty).
    pub fn is_connected(&self, set: &VertexSet) -> bool {
        let Some(start) = set.iter().next() else {
            return false;
        };
        self.reach_count(set, start, &[]) == set.len()
    }

    /// Number of members of `set` reachable from `start` inside the induced
    /// subgraph while treating `excluded` as absent.
    pub fn reach_count(&self, set: &VertexSet, start: usize, excluded: &[usize]) -> usize {
        if !set.contains(start) || excluded.contains(&start) {
            return 0;
        }
        let mut seen = vec![false; self.len()];
        for &x in excluded {
            seen[x] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for w in self.neighbors(v) {
                if set.contains(w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// Cost of a closed walk given as a cyclic vertex sequence.
    pub fn closed_walk_cost(&self, walk: &[usize]) -> f64 {
        if walk.len() < 2 {
            return 0.0;
        }
        walk.iter()
            .zip(walk.iter().cycle().skip(1))
            .map(|(&a, &b)| self.edge_weight(a, b))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vertex_weight_by_degree() {
        let g = TerrainGraph::full(3, 3);
        assert_eq!(g.vertex_weight(TerrainCoord::new(1, 1)).unwrap(), 4.0);
        let single = TerrainGraph::full(1, 1);
        assert_eq!(single.vertex_weight(TerrainCoord::new(0, 0)).unwrap(), 0.0);
        let two = TerrainGraph::full(2, 2);
        assert_eq!(two.vertex_weight(TerrainCoord::new(0, 0)).unwrap(), 2.0);
    }

    #[test]
    fn vertex_weight_of_absent_cell_fails() {
        let g = TerrainGraph::new(2, 1, vec![true, false]).unwrap();
        assert!(matches!(
            g.vertex_weight(TerrainCoord::new(1, 0)),
            Err(Error::AbsentTerrainVertex(_))
        ));
        assert!(g.vertex_weight(TerrainCoord::new(5, 0)).is_err());
    }

    #[test]
    fn single_cell_decomposition() {
        let g = TerrainGraph::full(1, 1);
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        assert_eq!(d.num_vertices(), 4);
        assert_eq!(d.num_edges(), 4);
        for v in d.vertices() {
            for u in d.neighbors(v) {
                assert_eq!(d.edge_weight(u, v), 0.0);
            }
        }
    }

    #[test]
    fn two_by_two_decomposition() {
        let g = TerrainGraph::full(2, 2);
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        assert_eq!(d.num_vertices(), 16);
        assert_eq!(d.num_edges(), 24);
        assert!(d.is_complete_graph());
    }

    #[test]
    fn two_by_one_weights_are_quarter() {
        let g = TerrainGraph::full(2, 1);
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        for v in d.vertices() {
            for u in d.neighbors(v) {
                assert!((d.edge_weight(u, v) - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn blocked_subcells_and_completeness() {
        let g = TerrainGraph::full(1, 1);
        let d = DecomposedGraph::build(&g, &[SubCellCoord::new(1, 1)]).unwrap();
        assert_eq!(d.num_vertices(), 3);
        assert!(!d.is_complete(0));
        assert!(!d.is_complete_graph());
        let full = DecomposedGraph::build(&g, &[]).unwrap();
        assert!(full.is_complete_at(TerrainCoord::new(0, 0)).unwrap());
    }

    #[test]
    fn blocked_subcell_of_absent_cell_rejected() {
        let g = TerrainGraph::new(2, 1, vec![true, false]).unwrap();
        assert!(DecomposedGraph::build(&g, &[SubCellCoord::new(2, 0)]).is_err());
    }

    #[test]
    fn diagonal_subcells_disconnect() {
        let g = TerrainGraph::full(1, 1);
        let blocked = [SubCellCoord::new(1, 0), SubCellCoord::new(0, 1)];
        let err = DecomposedGraph::build(&g, &blocked).unwrap_err();
        assert!(matches!(err, Error::Disconnected(ref reps) if reps.len() == 2));
        let d = DecomposedGraph::build_unchecked(&g, &blocked).unwrap();
        let comps = d.components(&d.vertex_set());
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec![0]);
    }

    #[test]
    fn components_edge_cases() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 2), &[]).unwrap();
        assert!(d.components(&VertexSet::new(d.len())).is_empty());
        let all = d.components(&d.vertex_set());
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].len(), 16);
    }

    #[test]
    fn parent_mapping_is_consistent() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 2), &[]).unwrap();
        for v in d.vertices() {
            let c = d.coord(v);
            assert_eq!(d.terrain().coord(d.parent(v)), c.parent());
            assert_eq!(d.quadrant(v), c.quadrant());
            assert_eq!(d.subcell(d.parent(v), d.quadrant(v)), v);
        }
    }

    #[test]
    fn set_edge_weight_validates() {
        let mut g = TerrainGraph::full(2, 2);
        let a = TerrainCoord::new(0, 0);
        assert!(g.set_edge_weight(a, TerrainCoord::new(1, 1), 1.0).is_err());
        assert!(g.set_edge_weight(a, TerrainCoord::new(1, 0), -1.0).is_err());
        g.set_edge_weight(a, TerrainCoord::new(0, 1), 3.0).unwrap();
        assert_eq!(g.vertex_weight(a).unwrap(), 4.0);
        assert_eq!(g.max_edge_weight(), 3.0);
    }

    #[test]
    fn row_wrap_is_not_an_edge() {
        let g = TerrainGraph::full(2, 2);
        assert_eq!(g.edge_weight(1, 2), None);
        let d = DecomposedGraph::build(&g, &[]).unwrap();
        assert!(!d.are_adjacent(3, 4));
    }

    fn random_terrain(rng: &mut ChaCha8Rng) -> TerrainGraph {
        let w = rng.gen_range(1..7);
        let h = rng.gen_range(1..7);
        let mut g = TerrainGraph::full(w, h);
        let edges: Vec<_> = g.edges().collect();
        for (a, b, _) in edges {
            let (ca, cb) = (g.coord(a), g.coord(b));
            g.set_edge_weight(ca, cb, rng.gen_range(0.0..10.0)).unwrap();
        }
        g
    }

    #[test]
    fn decomposed_weight_split_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = random_terrain(&mut rng);
            let d = DecomposedGraph::build(&g, &[]).unwrap();
            assert_eq!(d.num_vertices(), 4 * g.num_vertices());
            for v in d.vertices() {
                for u in d.neighbors(v) {
                    let wu = g.vertex_weight(g.coord(d.parent(u))).unwrap();
                    let wv = g.vertex_weight(g.coord(d.parent(v))).unwrap();
                    assert!((d.edge_weight(u, v) - (wu + wv) / 8.0).abs() < 1e-12);
                }
            }
        }
    }
}
