//! Cached operator pools with incremental refresh.
//!
//! Validity is cached per robot (grow, dedup) and per robot pair
//! (exchange). The light/heavy split by mean path cost is applied when a
//! pool is assembled, so cost changes alone never force re-enumeration.

use crate::grid::{DecomposedGraph, VertexSet, EPS};
use crate::partition::{CellEdge, Mutation, Operator, OperatorKind, Partition};

/// Same-cell edges `(u, v)` with `v` a partner of `u` and `u < v`.
fn cell_partners<'a>(d: &'a DecomposedGraph, u: usize) -> impl Iterator<Item = usize> + 'a {
    let cell = d.parent(u);
    d.neighbors(u).filter(move |&v| v > u && d.parent(v) == cell)
}

/// Valid grow edges of robot `i`, in canonical order.
pub fn valid_grow_edges(d: &DecomposedGraph, p: &Partition, i: usize) -> Vec<CellEdge> {
    let boundary = p.boundary_vertices(d, i);
    let mut out: Vec<CellEdge> = boundary
        .iter()
        .flat_map(|u| cell_partners(d, u).filter(|&v| boundary.contains(v)).map(move |v| (u, v)))
        .filter_map(|(u, v)| CellEdge::new(d, u, v))
        .filter(|&e| p.is_valid_grow(d, i, e))
        .collect();
    out.sort_unstable();
    out
}

/// Valid dedup edges of robot `i`, in canonical order.
pub fn valid_dedup_edges(d: &DecomposedGraph, p: &Partition, i: usize) -> Vec<CellEdge> {
    let set = p.set(i);
    let dup = p.duplicated();
    let mut out: Vec<CellEdge> = dup
        .iter()
        .filter(|&u| set.contains(u))
        .flat_map(|u| cell_partners(d, u).filter(|&v| dup.contains(v)).map(move |v| (u, v)))
        .filter_map(|(u, v)| CellEdge::new(d, u, v))
        .filter(|&e| p.is_valid_dedup(d, i, e))
        .collect();
    out.sort_unstable();
    out
}

fn exchange_edges(d: &DecomposedGraph, p: &Partition, grows: &[CellEdge], receiver: usize, donor: usize) -> Vec<CellEdge> {
    if receiver == donor {
        return Vec::new();
    }
    let set = p.set(donor);
    grows
        .iter()
        .copied()
        .filter(|e| set.contains(e.ends().0) && set.contains(e.ends().1))
        .filter(|&e| p.is_valid_exchange(d, receiver, donor, e))
        .collect()
}

/// Mean-cost classification: `true` marks a light robot (cost ≤ mean).
pub fn light_robots(costs: &[f64]) -> Vec<bool> {
    let mean = costs.iter().sum::<f64>() / costs.len().max(1) as f64;
    costs.iter().map(|&c| c <= mean + EPS).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPools {
    grow: Vec<Vec<CellEdge>>,
    dedup: Vec<Vec<CellEdge>>,
    /// `exchange[receiver][donor]`
    exchange: Vec<Vec<Vec<CellEdge>>>,
    light: Vec<bool>,
}

impl OperatorPools {
    pub fn new(d: &DecomposedGraph, p: &Partition, costs: &[f64]) -> Self {
        let k = p.num_robots();
        let grow: Vec<_> = (0..k).map(|i| valid_grow_edges(d, p, i)).collect();
        let dedup = (0..k).map(|i| valid_dedup_edges(d, p, i)).collect();
        let exchange = (0..k)
            .map(|i| (0..k).map(|j| exchange_edges(d, p, &grow[i], i, j)).collect())
            .collect();
        Self {
            grow,
            dedup,
            exchange,
            light: light_robots(costs),
        }
    }

    /// Re-enumerates only the caches a mutation can have invalidated.
    pub fn refresh_after(&mut self, d: &DecomposedGraph, p: &Partition, m: &Mutation, costs: &[f64]) {
        let k = p.num_robots();
        let modified = m.robots();
        let touched = m.vertices();
        for &i in &modified {
            self.grow[i] = valid_grow_edges(d, p, i);
        }
        for i in 0..k {
            let set: &VertexSet = p.set(i);
            let counts_changed = touched.iter().any(|&v| set.contains(v));
            if modified.contains(&i) || counts_changed {
                self.dedup[i] = valid_dedup_edges(d, p, i);
            }
        }
        for i in 0..k {
            for j in 0..k {
                if modified.contains(&i) || modified.contains(&j) {
                    self.exchange[i][j] = exchange_edges(d, p, &self.grow[i], i, j);
                }
            }
        }
        self.reclassify(costs);
    }

    pub fn reclassify(&mut self, costs: &[f64]) {
        self.light = light_robots(costs);
    }

    pub fn is_light(&self, i: usize) -> bool {
        self.light[i]
    }

    /// Operators of one pool in canonical order: grows and exchanges for
    /// light receivers, dedups for heavy robots.
    pub fn pool(&self, kind: OperatorKind) -> Vec<Operator> {
        let k = self.light.len();
        let mut out = Vec::new();
        for i in 0..k {
            match kind {
                OperatorKind::Grow if self.light[i] => {
                    out.extend(self.grow[i].iter().map(|&edge| Operator::Grow { robot: i, edge }));
                }
                OperatorKind::Dedup if !self.light[i] => {
                    out.extend(self.dedup[i].iter().map(|&edge| Operator::Dedup { robot: i, edge }));
                }
                OperatorKind::Exchange if self.light[i] => {
                    for j in 0..k {
                        out.extend(self.exchange[i][j].iter().map(|&edge| Operator::Exchange {
                            receiver: i,
                            donor: j,
                            edge,
                        }));
                    }
                }
                _ => {}
            }
        }
        out
    }

    pub fn is_empty(&self, kind: OperatorKind) -> bool {
        let k = self.light.len();
        match kind {
            OperatorKind::Grow => (0..k).all(|i| !self.light[i] || self.grow[i].is_empty()),
            OperatorKind::Dedup => (0..k).all(|i| self.light[i] || self.dedup[i].is_empty()),
            OperatorKind::Exchange => (0..k).all(|i| !self.light[i] || self.exchange[i].iter().all(Vec::is_empty)),
        }
    }

    /// Valid dedup edges of robot `i` regardless of its class.
    pub fn dedup_edges(&self, i: usize) -> &[CellEdge] {
        &self.dedup[i]
    }
}

/// All valid operators of a kind given path costs, in canonical order.
pub fn enumerate_operators(d: &DecomposedGraph, p: &Partition, costs: &[f64], kind: OperatorKind) -> Vec<Operator> {
    OperatorPools::new(d, p, costs).pool(kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SubCellCoord, TerrainGraph};

    fn rect(d: &DecomposedGraph, c0: usize, r0: usize, c1: usize, r1: usize) -> VertexSet {
        let mut s = VertexSet::new(d.len());
        for r in r0..r1 {
            for c in c0..c1 {
                s.insert(d.index(SubCellCoord::new(c, r)).unwrap());
            }
        }
        s
    }

    #[test]
    fn single_robot_pools_are_empty() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 2), &[]).unwrap();
        let p = Partition::new(&d, vec![0], vec![d.vertex_set()]).unwrap();
        let pools = OperatorPools::new(&d, &p, &[6.0]);
        for kind in OperatorKind::ALL {
            assert!(pools.is_empty(kind));
            assert!(pools.pool(kind).is_empty());
        }
    }

    #[test]
    fn light_robot_grows_toward_heavy_one() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 1), &[]).unwrap();
        let s0 = rect(&d, 0, 0, 2, 2);
        let s1 = rect(&d, 2, 0, 6, 2);
        let root1 = d.index(SubCellCoord::new(5, 0)).unwrap();
        let p = Partition::new(&d, vec![0, root1], vec![s0, s1]).unwrap();
        let pools = OperatorPools::new(&d, &p, &[1.0, 2.0]);
        let grows = pools.pool(OperatorKind::Grow);
        assert_eq!(grows.len(), 1);
        assert!(matches!(grows[0], Operator::Grow { robot: 0, .. }));
        let ex = pools.pool(OperatorKind::Exchange);
        assert_eq!(ex.len(), 1);
        assert!(pools.is_empty(OperatorKind::Dedup));
    }

    #[test]
    fn incremental_refresh_matches_rebuild() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 1), &[]).unwrap();
        let s0 = rect(&d, 0, 0, 2, 2);
        let s1 = rect(&d, 2, 0, 6, 2);
        let root1 = d.index(SubCellCoord::new(5, 0)).unwrap();
        let mut p = Partition::new(&d, vec![0, root1], vec![s0, s1]).unwrap();
        let costs = [1.0, 2.0];
        let mut pools = OperatorPools::new(&d, &p, &costs);
        let op = pools.pool(OperatorKind::Grow)[0];
        let m = p.apply(&d, &op).unwrap();
        pools.refresh_after(&d, &p, &m, &costs);
        assert_eq!(pools, OperatorPools::new(&d, &p, &costs));
        assert!(!pools.dedup_edges(1).is_empty() || !pools.dedup_edges(0).is_empty());
    }
}
