//! Per-robot subgraphs of the decomposed graph and the edge-wise boundary
//! editing operators that reshape them.
//!
//! A robot's subgraph is its vertex set; edges are induced from the
//! decomposed graph. Every operator adds or removes the two endpoints of a
//! single edge whose endpoints share a terrain cell.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{side_of_pair, DecomposedGraph, Side, VertexSet};

/// An edge between two subcells of the same terrain cell, stored with the
/// smaller index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellEdge(usize, usize);

impl CellEdge {
    /// Canonical edge if `u` and `v` are adjacent subcells of one cell.
    pub fn new(d: &DecomposedGraph, u: usize, v: usize) -> Option<Self> {
        (u != v && d.parent(u) == d.parent(v) && d.are_adjacent(u, v))
            .then(|| Self(u.min(v), u.max(v)))
    }

    pub fn ends(self) -> (usize, usize) {
        (self.0, self.1)
    }
}

/// All same-cell edges of `d`, in canonical order.
pub fn cell_edges(d: &DecomposedGraph) -> Vec<CellEdge> {
    let mut out = Vec::new();
    for cell in d.terrain().present_cells() {
        for side in Side::ALL {
            let [a, b] = side.quadrants().map(|q| d.subcell(cell, q));
            if let Some(e) = CellEdge::new(d, a, b) {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Grow,
    Dedup,
    Exchange,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 3] = [OperatorKind::Grow, OperatorKind::Dedup, OperatorKind::Exchange];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Grow => "grow",
            OperatorKind::Dedup => "dedup",
            OperatorKind::Exchange => "exchange",
        }
    }
}

/// Boundary editing operator. The derived ordering (kind, robots, edge) is
/// the canonical operator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// Add both endpoints of `edge` to `robot`.
    Grow { robot: usize, edge: CellEdge },
    /// Remove both endpoints of `edge` from `robot`.
    Dedup { robot: usize, edge: CellEdge },
    /// Move both endpoints of `edge` from `donor` to `receiver`.
    Exchange {
        receiver: usize,
        donor: usize,
        edge: CellEdge,
    },
}

impl Operator {
    pub fn kind(&self) -> OperatorKind {
        match self {
            Operator::Grow { .. } => OperatorKind::Grow,
            Operator::Dedup { .. } => OperatorKind::Dedup,
            Operator::Exchange { .. } => OperatorKind::Exchange,
        }
    }

    pub fn edge(&self) -> CellEdge {
        match *self {
            Operator::Grow { edge, .. } | Operator::Dedup { edge, .. } | Operator::Exchange { edge, .. } => edge,
        }
    }

    /// Robots whose subgraphs the operator modifies.
    pub fn robots(&self) -> Vec<usize> {
        match *self {
            Operator::Grow { robot, .. } | Operator::Dedup { robot, .. } => vec![robot],
            Operator::Exchange { receiver, donor, .. } => vec![receiver, donor],
        }
    }
}

/// Record of an applied change, sufficient to undo it.
#[derive(Clone, Debug, PartialEq)]
pub struct Mutation {
    pub op: Option<Operator>,
    /// `(robot, vertex, inserted)` in application order.
    changes: Vec<(usize, usize, bool)>,
}

impl Mutation {
    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    pub fn robots(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.changes.iter().map(|c| c.0).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.changes.iter().map(|c| c.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    roots: Vec<usize>,
    sets: Vec<VertexSet>,
    counts: Vec<u32>,
    duplicated: VertexSet,
}

impl Partition {
    /// Builds and validates a partition.
    pub fn new(d: &DecomposedGraph, roots: Vec<usize>, sets: Vec<VertexSet>) -> Result<Self> {
        let p = Self::new_unchecked(d, roots, sets)?;
        p.validate(d)?;
        Ok(p)
    }

    /// Builds the bookkeeping without checking coverage or connectivity.
    pub fn new_unchecked(d: &DecomposedGraph, roots: Vec<usize>, sets: Vec<VertexSet>) -> Result<Self> {
        if roots.len() != sets.len() || roots.is_empty() {
            return Err(Error::InvalidPartition(format!(
                "{} roots for {} vertex sets",
                roots.len(),
                sets.len()
            )));
        }
        if let Some(s) = sets.iter().find(|s| s.capacity() != d.len()) {
            return Err(Error::InvalidPartition(format!(
                "vertex set capacity {} does not match graph size {}",
                s.capacity(),
                d.len()
            )));
        }
        let (counts, duplicated) = recount(d.len(), &sets);
        Ok(Self {
            roots,
            sets,
            counts,
            duplicated,
        })
    }

    /// Checks roots, coverage, connectivity and count bookkeeping.
    pub fn validate(&self, d: &DecomposedGraph) -> Result<()> {
        let mut seen_roots = Vec::with_capacity(self.roots.len());
        for (i, (&r, set)) in self.roots.iter().zip(&self.sets).enumerate() {
            if r >= d.len() || !d.is_present(r) {
                return Err(Error::InvalidPartition(format!("root of robot {i} is not a vertex")));
            }
            if seen_roots.contains(&r) {
                return Err(Error::DuplicateRoot(d.coord(r)));
            }
            seen_roots.push(r);
            if !set.contains(r) {
                return Err(Error::InvalidPartition(format!(
                    "robot {i} does not contain its root {}",
                    d.coord(r)
                )));
            }
            if let Some(v) = set.iter().find(|&v| !d.is_present(v)) {
                return Err(Error::InvalidPartition(format!(
                    "robot {i} holds absent subcell {}",
                    d.coord(v)
                )));
            }
            if !d.is_connected(set) {
                return Err(Error::InvalidPartition(format!("subgraph of robot {i} is disconnected")));
            }
        }
        if let Some(v) = d.vertices().find(|&v| self.counts[v] == 0) {
            return Err(Error::InvalidPartition(format!("subcell {} is not covered", d.coord(v))));
        }
        let (counts, dup) = recount(d.len(), &self.sets);
        if counts != self.counts || dup != self.duplicated {
            return Err(Error::InvalidPartition("occurrence counts are stale".into()));
        }
        Ok(())
    }

    pub fn num_robots(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> usize {
        self.roots[i]
    }

    pub fn set(&self, i: usize) -> &VertexSet {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    /// Number of subgraphs containing `v`.
    pub fn count(&self, v: usize) -> u32 {
        self.counts[v]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Vertices held by more than one robot.
    pub fn duplicated(&self) -> &VertexSet {
        &self.duplicated
    }

    /// Same-cell edges with both endpoints in robot `i`'s subgraph.
    pub fn same_cell_edges(&self, d: &DecomposedGraph, i: usize) -> Vec<CellEdge> {
        let set = &self.sets[i];
        cell_edges(d)
            .into_iter()
            .filter(|e| set.contains(e.0) && set.contains(e.1))
            .collect()
    }

    /// Same-cell edges with both endpoints outside robot `i`'s subgraph.
    pub fn outside_cell_edges(&self, d: &DecomposedGraph, i: usize) -> Vec<CellEdge> {
        let set = &self.sets[i];
        cell_edges(d)
            .into_iter()
            .filter(|e| !set.contains(e.0) && !set.contains(e.1))
            .collect()
    }

    /// Vertices outside robot `i`'s subgraph adjacent to it.
    pub fn boundary_vertices(&self, d: &DecomposedGraph, i: usize) -> VertexSet {
        let set = &self.sets[i];
        let mut out = VertexSet::new(d.len());
        for v in set.iter() {
            for u in d.neighbors(v) {
                if !set.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    fn on_boundary(&self, d: &DecomposedGraph, i: usize, v: usize) -> bool {
        let set = &self.sets[i];
        d.is_present(v) && !set.contains(v) && d.neighbors(v).any(|u| set.contains(u))
    }

    /// Both endpoints lie on the boundary of robot `i` and the subgraph holds
    /// an edge parallel to `e` adjacent to it.
    pub fn is_valid_grow(&self, d: &DecomposedGraph, i: usize, e: CellEdge) -> bool {
        let (u, v) = e.ends();
        if i >= self.num_robots() || !self.on_boundary(d, i, u) || !self.on_boundary(d, i, v) {
            return false;
        }
        let set = &self.sets[i];
        d.neighbors(u).filter(|&p| set.contains(p)).any(|p| {
            d.neighbors(v)
                .filter(|&q| set.contains(q))
                .any(|q| d.are_adjacent(p, q))
        })
    }

    pub fn is_valid_dedup(&self, d: &DecomposedGraph, i: usize, e: CellEdge) -> bool {
        let (u, v) = e.ends();
        i < self.num_robots()
            && self.duplicated.contains(u)
            && self.duplicated.contains(v)
            && self.removal_ok(d, i, e)
    }

    pub fn is_valid_exchange(&self, d: &DecomposedGraph, receiver: usize, donor: usize, e: CellEdge) -> bool {
        receiver != donor
            && donor < self.num_robots()
            && self.is_valid_grow(d, receiver, e)
            && self.removal_ok(d, donor, e)
    }

    /// Dedup conditions without the duplication requirement: membership,
    /// root safety, connectivity and, for a cell complete within the
    /// subgraph, the neighbourhood conditions.
    fn removal_ok(&self, d: &DecomposedGraph, i: usize, e: CellEdge) -> bool {
        let (u, v) = e.ends();
        let set = &self.sets[i];
        if !set.contains(u) || !set.contains(v) {
            return false;
        }
        let root = self.roots[i];
        if u == root || v == root {
            return false;
        }
        if !self.neighbourhood_ok(d, i, e) {
            return false;
        }
        d.reach_count(set, root, &[u, v]) == set.len() - 2
    }

    fn neighbourhood_ok(&self, d: &DecomposedGraph, i: usize, e: CellEdge) -> bool {
        let set = &self.sets[i];
        let (u, v) = e.ends();
        let cell = d.parent(u);
        if !d.subcells(cell).iter().all(|&s| set.contains(s)) {
            return true;
        }
        let terrain = d.terrain();
        let side = side_of_pair(d.quadrant(u), d.quadrant(v)).expect("cell edge lies on a side");
        let holds_any = |c: usize| d.present_subcells(c).any(|s| set.contains(s));
        let holds_all = |c: usize| holds_any(c) && d.present_subcells(c).all(|s| set.contains(s));

        let top = terrain.neighbor(cell, side);
        if top.is_some_and(holds_any) {
            return false;
        }
        let Some(bottom) = terrain.neighbor(cell, side.opposite()) else {
            return false;
        };
        if !holds_all(bottom) {
            return false;
        }
        for s in side.perpendicular() {
            if let Some(lateral) = terrain.neighbor(cell, s) {
                if holds_any(lateral) {
                    let diagonal = terrain.neighbor(lateral, side.opposite());
                    if !holds_all(lateral) || !diagonal.is_some_and(holds_all) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_valid(&self, d: &DecomposedGraph, op: &Operator) -> bool {
        match *op {
            Operator::Grow { robot, edge } => self.is_valid_grow(d, robot, edge),
            Operator::Dedup { robot, edge } => self.is_valid_dedup(d, robot, edge),
            Operator::Exchange { receiver, donor, edge } => self.is_valid_exchange(d, receiver, donor, edge),
        }
    }

    /// Applies a valid operator; stale operators are rejected untouched.
    pub fn apply(&mut self, d: &DecomposedGraph, op: &Operator) -> Result<Mutation> {
        if !self.is_valid(d, op) {
            return Err(Error::StaleOperator);
        }
        let (u, v) = op.edge().ends();
        let mut m = Mutation {
            op: Some(*op),
            changes: Vec::with_capacity(4),
        };
        match *op {
            Operator::Grow { robot, .. } => {
                self.insert(robot, u, &mut m);
                self.insert(robot, v, &mut m);
            }
            Operator::Dedup { robot, .. } => {
                self.erase(robot, u, &mut m);
                self.erase(robot, v, &mut m);
            }
            Operator::Exchange { receiver, donor, .. } => {
                self.insert(receiver, u, &mut m);
                self.insert(receiver, v, &mut m);
                self.erase(donor, u, &mut m);
                self.erase(donor, v, &mut m);
            }
        }
        Ok(m)
    }

    /// Removes vertices from a robot without any validity check; the caller
    /// guarantees the invariants.
    pub(crate) fn remove_unchecked(&mut self, robot: usize, vertices: &[usize]) -> Mutation {
        let mut m = Mutation {
            op: None,
            changes: Vec::with_capacity(vertices.len()),
        };
        for &v in vertices {
            self.erase(robot, v, &mut m);
        }
        m
    }

    pub fn rollback(&mut self, m: Mutation) {
        for &(robot, v, inserted) in m.changes.iter().rev() {
            if inserted {
                self.sets[robot].remove(v);
                self.dec(v);
            } else {
                self.sets[robot].insert(v);
                self.inc(v);
            }
        }
    }

    fn insert(&mut self, robot: usize, v: usize, m: &mut Mutation) {
        if self.sets[robot].insert(v) {
            self.inc(v);
            m.changes.push((robot, v, true));
        }
    }

    fn erase(&mut self, robot: usize, v: usize, m: &mut Mutation) {
        if self.sets[robot].remove(v) {
            self.dec(v);
            m.changes.push((robot, v, false));
        }
    }

    fn inc(&mut self, v: usize) {
        self.counts[v] += 1;
        if self.counts[v] == 2 {
            self.duplicated.insert(v);
        }
    }

    fn dec(&mut self, v: usize) {
        self.counts[v] -= 1;
        if self.counts[v] == 1 {
            self.duplicated.remove(v);
        }
    }
}

/// Occurrence counts and duplication set computed from scratch.
pub fn recount(capacity: usize, sets: &[VertexSet]) -> (Vec<u32>, VertexSet) {
    let mut counts = vec![0u32; capacity];
    for s in sets {
        for v in s.iter() {
            counts[v] += 1;
        }
    }
    let dup = VertexSet::from_indices(capacity, (0..capacity).filter(|&v| counts[v] > 1));
    (counts, dup)
}
