//! Exact brute-force oracles for desk-scale instances.
//!
//! Both oracles run Dijkstra over `(vertex, visited set)` states, so they
//! make no use of spanning trees and serve as independent references for
//! the coverage walk construction and the local search.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::grid::DecomposedGraph;

pub const SINGLE_COVER_MAX_VERTICES: usize = 16;
pub const MCPP_MAX_VERTICES: usize = 10;
pub const MCPP_MAX_ROBOTS: usize = 3;

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    state: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.state.cmp(&self.state))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Compact {
    n: usize,
    local: Vec<usize>,
    adj: Vec<Vec<(usize, f64)>>,
}

fn compact(d: &DecomposedGraph) -> Compact {
    let verts: Vec<usize> = d.vertices().collect();
    let mut local = vec![usize::MAX; d.len()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let adj = verts
        .iter()
        .map(|&v| {
            d.neighbors(v)
                .map(|u| (local[u], d.edge_weight(u, v)))
                .collect()
        })
        .collect();
    Compact {
        n: verts.len(),
        local,
        adj,
    }
}

/// Minimum cost of a walk from `start` back to `start` for every visited
/// set, indexed by mask. Unreachable masks are infinite.
fn closed_walk_costs(c: &Compact, start: usize) -> Vec<f64> {
    let n = c.n;
    let states = n << n;
    let mut dist = vec![f64::INFINITY; states];
    let encode = |v: usize, mask: usize| mask * n + v;
    let s0 = encode(start, 1 << start);
    dist[s0] = 0.0;
    let mut heap = BinaryHeap::from([Entry { cost: 0.0, state: s0 }]);
    while let Some(Entry { cost, state }) = heap.pop() {
        if cost > dist[state] {
            continue;
        }
        let (v, mask) = (state % n, state / n);
        for &(u, w) in &c.adj[v] {
            let next = encode(u, mask | (1 << u));
            let nc = cost + w;
            if nc < dist[next] {
                dist[next] = nc;
                heap.push(Entry { cost: nc, state: next });
            }
        }
    }
    (0..1usize << n).map(|mask| dist[encode(start, mask)]).collect()
}

/// Exact minimum cost of a closed walk from `root` visiting every vertex of
/// `d`. Edges may be repeated.
pub fn oracle_single_cover(d: &DecomposedGraph, root: usize) -> Result<f64> {
    let c = compact(d);
    if c.n > SINGLE_COVER_MAX_VERTICES {
        return Err(Error::OracleTooLarge(format!(
            "{} vertices exceeds the cap of {}",
            c.n, SINGLE_COVER_MAX_VERTICES
        )));
    }
    if !d.is_present(root) {
        return Err(Error::AbsentSubCell(d.coord(root)));
    }
    let costs = closed_walk_costs(&c, c.local[root]);
    Ok(costs[(1 << c.n) - 1])
}

/// Exact minimum makespan of `roots.len()` closed walks that jointly visit
/// every vertex of `d`.
pub fn oracle_mcpp(d: &DecomposedGraph, roots: &[usize]) -> Result<f64> {
    let c = compact(d);
    if c.n > MCPP_MAX_VERTICES || roots.len() > MCPP_MAX_ROBOTS || roots.is_empty() {
        return Err(Error::OracleTooLarge(format!(
            "{} vertices / {} robots exceeds the cap of {} / {}",
            c.n,
            roots.len(),
            MCPP_MAX_VERTICES,
            MCPP_MAX_ROBOTS
        )));
    }
    if let Some(&r) = roots.iter().find(|&&r| !d.is_present(r)) {
        return Err(Error::AbsentSubCell(d.coord(r)));
    }
    let full = (1usize << c.n) - 1;
    // best[i][req]: cheapest closed walk of robot i whose visited set
    // contains req (superset minimum over exact visited sets).
    let best: Vec<Vec<f64>> = roots
        .iter()
        .map(|&r| {
            let mut b = closed_walk_costs(&c, c.local[r]);
            for bit in 0..c.n {
                for mask in (0..=full).rev() {
                    if mask & (1 << bit) == 0 {
                        let sup = b[mask | (1 << bit)];
                        if sup < b[mask] {
                            b[mask] = sup;
                        }
                    }
                }
            }
            b
        })
        .collect();

    let makespan = match best.len() {
        1 => best[0][full],
        2 => (0..=full)
            .map(|m| best[0][m].max(best[1][full ^ m]))
            .fold(f64::INFINITY, f64::min),
        _ => {
            let mut opt = f64::INFINITY;
            for m1 in 0..=full {
                let c1 = best[0][m1];
                if c1 >= opt {
                    continue;
                }
                let rest = full ^ m1;
                let mut m2 = rest;
                loop {
                    let v = c1.max(best[1][m2]).max(best[2][rest ^ m2]);
                    if v < opt {
                        opt = v;
                    }
                    if m2 == 0 {
                        break;
                    }
                    m2 = (m2 - 1) & rest;
                }
            }
            opt
        }
    };
    Ok(makespan)
}
