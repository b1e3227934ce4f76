//! Annealed local search over boundary editing operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estc::{estc_path, CoveragePath};
use crate::grid::{DecomposedGraph, VertexSet, EPS};
use crate::partition::{Mutation, Operator, OperatorKind, Partition};
use crate::pools::{valid_dedup_edges, OperatorPools};

/// Largest spread of shifted heuristic values fed to the softmax; wider
/// spreads are compressed linearly to this range.
pub const HEURISTIC_SPREAD_CAP: f64 = 5.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub max_iters: usize,
    pub dedup_period: usize,
    /// Multiplicative temperature decay per iteration.
    pub alpha: f64,
    /// Pool-weight decay.
    pub gamma: f64,
    pub seed: u64,
}

impl SearchParams {
    /// Parameters whose temperature falls from 1 to `final_temperature`
    /// over `max_iters` iterations.
    pub fn with_final_temperature(
        max_iters: usize,
        dedup_period: usize,
        final_temperature: f64,
        gamma: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(final_temperature > 0.0 && final_temperature <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "final temperature {final_temperature} must lie in (0, 1]"
            )));
        }
        let p = Self {
            max_iters,
            dedup_period,
            alpha: cooling_factor(final_temperature, max_iters.max(1)),
            gamma,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max iterations must be positive".into()));
        }
        if self.dedup_period == 0 {
            return Err(Error::InvalidParameter("dedup period must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!("gamma {} outside [0, 1]", self.gamma)));
        }
        Ok(())
    }
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            max_iters: 1500,
            dedup_period: 100,
            alpha: cooling_factor(0.2, 1500),
            gamma: 0.01,
            seed: 0,
        }
    }
}

/// Decay factor reaching `final_temperature` after `steps` steps from 1.
pub fn cooling_factor(final_temperature: f64, steps: usize) -> f64 {
    (final_temperature.ln() / steps as f64).exp()
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub partition: Partition,
    pub paths: Vec<CoveragePath>,
    pub makespan: f64,
    /// Iteration at which this solution was found; 0 for an initial one.
    pub iteration: usize,
    pub seed: u64,
}

impl Solution {
    /// Plans every robot's subgraph with ESTC.
    pub fn from_partition(d: &DecomposedGraph, partition: Partition) -> Result<Self> {
        partition.validate(d)?;
        let paths = (0..partition.num_robots())
            .map(|i| estc_path(d, partition.set(i), partition.root(i)))
            .collect::<Result<Vec<_>>>()?;
        let makespan = makespan(&paths);
        Ok(Self {
            partition,
            paths,
            makespan,
            iteration: 0,
            seed: 0,
        })
    }

    pub fn num_robots(&self) -> usize {
        self.paths.len()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.paths.iter().map(CoveragePath::cost).collect()
    }

    /// Checks the partition and that each path is a closed walk from its
    /// root visiting exactly its robot's subgraph.
    pub fn validate(&self, d: &DecomposedGraph) -> Result<()> {
        self.partition.validate(d)?;
        if self.paths.len() != self.partition.num_robots() {
            return Err(Error::InvalidPartition("one path per robot expected".into()));
        }
        for (i, path) in self.paths.iter().enumerate() {
            let bad = |msg: &str| Error::InvalidPartition(format!("path of robot {i}: {msg}"));
            if path.root() != self.partition.root(i) {
                return Err(bad("does not start at the root"));
            }
            if path.steps().any(|(a, b)| !d.are_adjacent(a, b)) {
                return Err(bad("steps between non-adjacent vertices"));
            }
            let visited = VertexSet::from_indices(d.len(), path.vertices().iter().copied());
            if &visited != self.partition.set(i) {
                return Err(bad("does not visit exactly its subgraph"));
            }
        }
        let m = makespan(&self.paths);
        if (m - self.makespan).abs() > EPS * m.max(1.0) {
            return Err(Error::InvalidPartition("stale makespan".into()));
        }
        Ok(())
    }
}

pub fn makespan(paths: &[CoveragePath]) -> f64 {
    paths.iter().map(CoveragePath::cost).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub pool: OperatorKind,
    pub robot: usize,
    pub other: Option<usize>,
    pub delta: f64,
    pub accepted: bool,
    pub makespan: f64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: Solution,
    /// Iterations actually executed (fewer than the maximum on early stop).
    pub iterations: usize,
    pub trace: Vec<TraceRecord>,
}

/// Softmax with max-shift; entries flagged unavailable get probability 0.
pub fn softmax(values: &[f64], available: &[bool]) -> Vec<f64> {
    let max = values
        .iter()
        .zip(available)
        .filter(|(_, &a)| a)
        .map(|(&v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = values
        .iter()
        .zip(available)
        .map(|(&v, &a)| if a { (v - max).exp() } else { 0.0 })
        .collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index drawn from a categorical distribution with one uniform draw.
fn draw(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Pool probabilities: softmax of the weights renormalized over nonempty
/// pools.
pub fn pool_probabilities(p: &[f64; 3], nonempty: &[bool; 3]) -> Option<[f64; 3]> {
    if !nonempty.iter().any(|&b| b) {
        return None;
    }
    let probs = softmax(p, nonempty);
    Some([probs[0], probs[1], probs[2]])
}

pub fn select_pool(p: &[f64; 3], nonempty: &[bool; 3], rng: &mut impl Rng) -> Option<OperatorKind> {
    let probs = pool_probabilities(p, nonempty)?;
    Some(OperatorKind::ALL[draw(&probs, rng)])
}

pub fn update_pool_weight(weight: f64, gamma: f64, delta: f64) -> f64 {
    let reward = if delta.is_finite() { (-delta).max(0.0) } else { 0.0 };
    (1.0 - gamma) * weight + gamma * reward
}

pub fn heuristic(op: &Operator, costs: &[f64], counts: &[u32], k: usize) -> f64 {
    let (u, v) = op.edge().ends();
    let n = (counts[u] + counts[v]) as f64 / 2.0;
    match *op {
        Operator::Grow { robot, .. } => -(k as f64) * costs[robot] - n,
        Operator::Dedup { robot, .. } => k as f64 * costs[robot] + n,
        Operator::Exchange { receiver, donor, .. } => costs[donor] - costs[receiver],
    }
}

/// Operator probabilities from heuristic values. Values are shifted by
/// their maximum; spreads above [`HEURISTIC_SPREAD_CAP`] are scaled down to
/// it so that no operator becomes unreachable.
pub fn operator_probabilities(h: &[f64]) -> Vec<f64> {
    let max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = h.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = ((max - min) / HEURISTIC_SPREAD_CAP).max(1.0);
    let scaled: Vec<f64> = h.iter().map(|&x| (x - max) / scale).collect();
    softmax(&scaled, &vec![true; h.len()])
}

pub fn sample_operator(ops: &[Operator], h: &[f64], rng: &mut impl Rng) -> Result<Operator> {
    if ops.is_empty() || ops.len() != h.len() {
        return Err(Error::InvalidParameter("cannot sample from an empty pool".into()));
    }
    Ok(ops[draw(&operator_probabilities(h), rng)])
}

/// Acceptance probability of a makespan change under temperature `t`,
/// with `scale` normalizing the change.
pub fn accept_probability(delta: f64, t: f64, scale: f64) -> f64 {
    if delta < 0.0 {
        1.0
    } else if !delta.is_finite() || t <= 0.0 {
        0.0
    } else {
        (-(delta / scale) / t).exp().min(1.0)
    }
}

pub fn accept(delta: f64, t: f64, scale: f64, rng: &mut impl Rng) -> bool {
    if delta < 0.0 {
        return true;
    }
    let p = accept_probability(delta, t, scale);
    rng.gen::<f64>() < p
}

pub fn temperature_step(t: f64, alpha: f64) -> f64 {
    alpha * t
}

/// Mutable search state: partition, paths and cached pools.
#[derive(Clone, Debug)]
pub struct SearchState<'a> {
    d: &'a DecomposedGraph,
    partition: Partition,
    paths: Vec<CoveragePath>,
    costs: Vec<f64>,
    pools: OperatorPools,
}

impl<'a> SearchState<'a> {
    pub fn new(d: &'a DecomposedGraph, s: &Solution) -> Self {
        let costs = s.costs();
        Self {
            d,
            pools: OperatorPools::new(d, &s.partition, &costs),
            partition: s.partition.clone(),
            paths: s.paths.clone(),
            costs,
        }
    }

    pub fn makespan(&self) -> f64 {
        self.costs.iter().copied().fold(0.0, f64::max)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn paths(&self) -> &[CoveragePath] {
        &self.paths
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn pools(&self) -> &OperatorPools {
        &self.pools
    }

    fn snapshot(&self, iteration: usize, seed: u64) -> Solution {
        Solution {
            partition: self.partition.clone(),
            paths: self.paths.clone(),
            makespan: self.makespan(),
            iteration,
            seed,
        }
    }

    /// Makespan change of `op` with the re-planned paths of the affected
    /// robots; the state is left untouched. Invalid operators yield +∞.
    pub fn evaluate_delta(&mut self, op: &Operator) -> Result<(f64, Vec<(usize, CoveragePath)>)> {
        let Ok(m) = self.partition.apply(self.d, op) else {
            return Ok((f64::INFINITY, Vec::new()));
        };
        let planned = op
            .robots()
            .into_iter()
            .map(|i| Ok((i, estc_path(self.d, self.partition.set(i), self.partition.root(i))?)))
            .collect::<Result<Vec<_>>>();
        self.partition.rollback(m);
        let planned = planned?;
        let after = self
            .costs
            .iter()
            .enumerate()
            .map(|(i, &c)| planned.iter().find(|(j, _)| *j == i).map_or(c, |(_, p)| p.cost()))
            .fold(0.0, f64::max);
        Ok((after - self.makespan(), planned))
    }

    fn commit(&mut self, op: &Operator, planned: Vec<(usize, CoveragePath)>) -> Result<()> {
        let m = self.partition.apply(self.d, op)?;
        for (i, path) in planned {
            self.costs[i] = path.cost();
            self.paths[i] = path;
        }
        self.pools.refresh_after(self.d, &self.partition, &m, &self.costs);
        Ok(())
    }

    fn robots_by_cost(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.costs.len()).collect();
        order.sort_by(|&a, &b| self.costs[b].total_cmp(&self.costs[a]).then(a.cmp(&b)));
        order
    }

    /// Finds a U-turn `p → u → v → q` in robot `i`'s walk where `u, v` are
    /// duplicated non-root vertices visited once and `p ~ q`. Returns the
    /// walk positions of `u` and `v`.
    fn find_u_turn(&self, i: usize) -> Option<(usize, usize)> {
        let walk = self.paths[i].vertices();
        let len = walk.len();
        if len < 4 {
            return None;
        }
        let root = self.partition.root(i);
        let dup = self.partition.duplicated();
        let visits = |x: usize| walk.iter().filter(|&&w| w == x).count();
        (0..len).find_map(|pos| {
            let (a, b) = ((pos + 1) % len, (pos + 2) % len);
            let (p, u, v, q) = (walk[pos], walk[a], walk[b], walk[(pos + 3) % len]);
            let ok = u != root
                && v != root
                && dup.contains(u)
                && dup.contains(v)
                && p != q
                && self.d.are_adjacent(p, q)
                && visits(u) == 1
                && visits(v) == 1;
            ok.then_some((a, b))
        })
    }

    /// Removes duplicated coverage: first U-turns in the walks, then every
    /// valid dedup operator. Returns the mutations performed.
    pub fn forced_deduplication(&mut self) -> Result<Vec<Mutation>> {
        let k = self.partition.num_robots();
        let mut done = Vec::new();
        for i in self.robots_by_cost() {
            while let Some((a, b)) = self.find_u_turn(i) {
                let walk = self.paths[i].vertices();
                let (u, v) = (walk[a], walk[b]);
                let spliced: Vec<usize> = walk
                    .iter()
                    .enumerate()
                    .filter(|&(pos, _)| pos != a && pos != b)
                    .map(|(_, &w)| w)
                    .collect();
                done.push(self.partition.remove_unchecked(i, &[u, v]));
                self.paths[i] = CoveragePath::new(self.d, spliced);
                self.costs[i] = self.paths[i].cost();
            }
        }
        for i in self.robots_by_cost() {
            loop {
                let edges = valid_dedup_edges(self.d, &self.partition, i);
                let counts = self.partition.counts();
                let best = edges
                    .iter()
                    .map(|&edge| Operator::Dedup { robot: i, edge })
                    .min_by(|a, b| {
                        heuristic(a, &self.costs, counts, k)
                            .total_cmp(&heuristic(b, &self.costs, counts, k))
                            .then(a.cmp(b))
                    });
                let Some(op) = best else { break };
                done.push(self.partition.apply(self.d, &op)?);
                self.paths[i] = estc_path(self.d, self.partition.set(i), self.partition.root(i))?;
                self.costs[i] = self.paths[i].cost();
            }
        }
        if !done.is_empty() {
            self.pools = OperatorPools::new(self.d, &self.partition, &self.costs);
        }
        Ok(done)
    }
}

/// Improves `initial` and returns the best solution found.
pub fn ls_mcpp(d: &DecomposedGraph, initial: &Solution, params: &SearchParams) -> Result<Solution> {
    Ok(search(d, initial, params, false)?.best)
}

/// Runs the search, optionally recording one trace record per iteration.
pub fn search(d: &DecomposedGraph, initial: &Solution, params: &SearchParams, record_trace: bool) -> Result<SearchOutcome> {
    params.validate()?;
    initial.validate(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut state = SearchState::new(d, initial);
    let tau0 = state.makespan();
    let scale = if tau0 > EPS { tau0 } else { 1.0 };
    let mut weights = [1.0; 3];
    let mut t = 1.0;
    let mut best = state.snapshot(0, params.seed);
    let mut trace = Vec::new();
    let mut iterations = 0;

    for it in 1..=params.max_iters {
        let nonempty = OperatorKind::ALL.map(|kind| !state.pools.is_empty(kind));
        let Some(kind) = select_pool(&weights, &nonempty, &mut rng) else {
            state.forced_deduplication()?;
            if state.makespan() < best.makespan - EPS {
                best = state.snapshot(iterations, params.seed);
            }
            break;
        };
        iterations = it;
        let ops = state.pools.pool(kind);
        let k = state.partition.num_robots();
        let h: Vec<f64> = ops
            .iter()
            .map(|op| heuristic(op, &state.costs, state.partition.counts(), k))
            .collect();
        let op = sample_operator(&ops, &h, &mut rng)?;
        let (delta, planned) = state.evaluate_delta(&op)?;
        weights[kind.index()] = update_pool_weight(weights[kind.index()], params.gamma, delta);
        let accepted = accept(delta, t, scale, &mut rng);
        if accepted {
            state.commit(&op, planned)?;
        }
        if it % params.dedup_period == 0 || delta < 0.0 {
            state.forced_deduplication()?;
        }
        if cfg!(debug_assertions) || it % params.dedup_period == 0 {
            state.partition.validate(d)?;
        }
        if state.makespan() < best.makespan - EPS {
            best = state.snapshot(it, params.seed);
        }
        t = temperature_step(t, params.alpha);
        if record_trace {
            let robots = op.robots();
            trace.push(TraceRecord {
                iteration: it,
                pool: kind,
                robot: robots[0],
                other: robots.get(1).copied(),
                delta,
                accepted,
                makespan: state.makespan(),
            });
        }
    }
    Ok(SearchOutcome { best, iterations, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SubCellCoord, TerrainGraph};
    use crate::partition::CellEdge;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pool_probability_examples() {
        let all = pool_probabilities(&[1.0; 3], &[true; 3]).unwrap();
        for p in all {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-12);
        }
        let two = pool_probabilities(&[1.0; 3], &[true, false, true]).unwrap();
        assert_abs_diff_eq!(two[0], 0.5, epsilon = 1e-12);
        assert_eq!(two[1], 0.0);
        assert_abs_diff_eq!(two[2], 0.5, epsilon = 1e-12);
        let one = pool_probabilities(&[1.0, 7.0, 2.0], &[false, false, true]).unwrap();
        assert_eq!(one, [0.0, 0.0, 1.0]);
        assert!(pool_probabilities(&[1.0; 3], &[false; 3]).is_none());
    }

    #[test]
    fn pool_weight_examples() {
        assert_abs_diff_eq!(update_pool_weight(1.0, 0.01, -5.0), 1.04, epsilon = 1e-12);
        assert_abs_diff_eq!(update_pool_weight(2.0, 0.01, 3.0), 1.98, epsilon = 1e-12);
        assert_eq!(update_pool_weight(1.7, 0.0, -5.0), 1.7);
        assert_abs_diff_eq!(update_pool_weight(1.0, 0.01, f64::INFINITY), 0.99, epsilon = 1e-12);
    }

    #[test]
    fn heuristic_examples() {
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let edge = CellEdge::new(&d, 0, 1).unwrap();
        let costs = [10.0, 10.0, 0.0, 0.0];
        let ones = vec![1u32; d.len()];
        let twos = vec![2u32; d.len()];
        assert_eq!(heuristic(&Operator::Grow { robot: 0, edge }, &costs, &ones, 4), -41.0);
        assert_eq!(heuristic(&Operator::Dedup { robot: 0, edge }, &costs, &twos, 4), 42.0);
        let ex = Operator::Exchange { receiver: 0, donor: 1, edge };
        assert_eq!(heuristic(&ex, &costs, &ones, 4), 0.0);
    }

    #[test]
    fn operator_probability_examples() {
        assert_eq!(operator_probabilities(&[3.0]), vec![1.0]);
        let eq = operator_probabilities(&[-7.0, -7.0]);
        assert_abs_diff_eq!(eq[0], 0.5, epsilon = 1e-12);
        let p = operator_probabilities(&[0.0, 3f64.ln()]);
        assert_abs_diff_eq!(p[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.75, epsilon = 1e-12);
        // huge magnitudes neither overflow nor collapse onto one operator
        let wide = operator_probabilities(&[-1e6, 0.0, -5e5]);
        assert!(wide.iter().all(|&x| x > 0.0 && x.is_finite()));
        assert!(wide[1] > wide[2] && wide[2] > wide[0]);
    }

    #[test]
    fn acceptance_examples() {
        assert_eq!(accept_probability(-1.0, 0.5, 1.0), 1.0);
        assert_eq!(accept_probability(0.0, 1.0, 10.0), 1.0);
        assert_abs_diff_eq!(accept_probability(5.0, 0.5, 10.0), (-1.0f64).exp(), epsilon = 1e-12);
        assert_eq!(accept_probability(1.0, 0.0, 1.0), 0.0);
        assert_eq!(accept_probability(f64::INFINITY, 1.0, 1.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(accept(-1.0, 0.0, 1.0, &mut rng));
        assert!(!accept(f64::INFINITY, 1.0, 1.0, &mut rng));
    }

    #[test]
    fn temperature_schedule() {
        for m in [1, 10, 1500, 3000] {
            let alpha = cooling_factor(0.2, m);
            let mut t = 1.0;
            for _ in 0..m {
                t = temperature_step(t, alpha);
            }
            assert_abs_diff_eq!(t, 0.2, epsilon = 1e-12);
        }
        assert_eq!(temperature_step(0.7, 1.0), 0.7);
        assert_eq!(temperature_step(0.7, 0.0), 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(SearchParams::default().validate().is_ok());
        let zero = SearchParams { max_iters: 0, ..SearchParams::default() };
        assert!(zero.validate().is_err());
        let gamma = SearchParams { gamma: 1.5, ..SearchParams::default() };
        assert!(gamma.validate().is_err());
        assert!(SearchParams::with_final_temperature(10, 0, 0.2, 0.01, 0).is_err());
    }

    #[test]
    fn single_robot_returns_initial() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 3), &[]).unwrap();
        let p = Partition::new(&d, vec![0], vec![d.vertex_set()]).unwrap();
        let init = Solution::from_partition(&d, p).unwrap();
        let out = search(&d, &init, &SearchParams::default(), true).unwrap();
        assert_eq!(out.best.makespan, init.makespan);
        assert_eq!(out.best.paths, init.paths);
        assert_eq!(out.iterations, 0);
        assert!(out.trace.is_empty());
    }

    #[test]
    fn dedup_of_makespan_robot_improves() {
        // robot 0 holds everything, robot 1 only the east cell
        let d = DecomposedGraph::build(&TerrainGraph::full(2, 1), &[]).unwrap();
        let east = VertexSet::from_indices(d.len(), (0..d.len()).filter(|&v| d.coord(v).col >= 2));
        let root1 = d.index(SubCellCoord::new(3, 0)).unwrap();
        let p = Partition::new(&d, vec![0, root1], vec![d.vertex_set(), east]).unwrap();
        let init = Solution::from_partition(&d, p).unwrap();
        let mut state = SearchState::new(&d, &init);
        let edge = CellEdge::new(&d, d.index(SubCellCoord::new(3, 0)).unwrap(), d.index(SubCellCoord::new(3, 1)).unwrap()).unwrap();
        let op = Operator::Dedup { robot: 0, edge };
        let before = state.partition().clone();
        let (delta, planned) = state.evaluate_delta(&op).unwrap();
        assert!(delta < 0.0);
        assert_eq!(planned.len(), 1);
        assert_eq!(state.partition(), &before);
        let stale = Operator::Dedup { robot: 1, edge };
        assert_eq!(state.evaluate_delta(&stale).unwrap().0, f64::INFINITY);
    }

    #[test]
    fn forced_deduplication_is_idempotent() {
        let d = DecomposedGraph::build(&TerrainGraph::full(3, 2), &[]).unwrap();
        let root1 = d.index(SubCellCoord::new(5, 3)).unwrap();
        let p = Partition::new(&d, vec![0, root1], vec![d.vertex_set(), d.vertex_set()]).unwrap();
        let init = Solution::from_partition(&d, p).unwrap();
        let mut state = SearchState::new(&d, &init);
        let removed = state.forced_deduplication().unwrap();
        assert!(!removed.is_empty());
        assert!(state.makespan() < init.makespan);
        state.partition().validate(&d).unwrap();
        let again = state.forced_deduplication().unwrap();
        assert!(again.is_empty());
    }

    #[test]
    fn search_is_deterministic_and_monotone() {
        let d = DecomposedGraph::build(&TerrainGraph::full(4, 3), &[]).unwrap();
        let root1 = d.index(SubCellCoord::new(7, 5)).unwrap();
        let west = VertexSet::from_indices(d.len(), (0..d.len()).filter(|&v| d.coord(v).col < 6));
        let east = VertexSet::from_indices(d.len(), (0..d.len()).filter(|&v| d.coord(v).col >= 6));
        let p = Partition::new(&d, vec![0, root1], vec![west, east]).unwrap();
        let init = Solution::from_partition(&d, p).unwrap();
        let params = SearchParams::with_final_temperature(300, 50, 0.2, 0.01, 7).unwrap();
        let a = search(&d, &init, &params, true).unwrap();
        let b = search(&d, &init, &params, true).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best.paths, b.best.paths);
        assert!(a.best.makespan <= init.makespan);
        a.best.validate(&d).unwrap();
        assert!(a.best.makespan < init.makespan);
    }
}
