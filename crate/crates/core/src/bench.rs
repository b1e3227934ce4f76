//! Benchmark harness: every (instance, seed) pair runs the initializer and
//! the local search, in parallel across runs.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::init::{initial_solution, InitMethod};
use crate::io::report::RunRecord;
use crate::io::Instance;
use crate::search::{search, SearchParams, Solution};

pub const LS_ALGORITHM: &str = "ls-mcpp";

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub seeds: Vec<u64>,
    pub init: InitMethod,
    pub max_iters: usize,
    pub dedup_period: usize,
    pub gamma: f64,
    pub final_temperature: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        let p = SearchParams::default();
        Self {
            seeds: (0..12).collect(),
            init: InitMethod::default(),
            max_iters: p.max_iters,
            dedup_period: p.dedup_period,
            gamma: p.gamma,
            final_temperature: 0.2,
        }
    }
}

impl BenchConfig {
    pub fn params(&self, seed: u64) -> Result<SearchParams> {
        SearchParams::with_final_temperature(self.max_iters, self.dedup_period, self.final_temperature, self.gamma, seed)
    }
}

/// Result of one (instance, seed) run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub initial: RunRecord,
    pub improved: RunRecord,
    pub solution: Solution,
}

/// Runs initializer and search once; runtimes exclude instance loading.
pub fn run_once(inst: &Instance, init: InitMethod, params: &SearchParams) -> Result<RunOutcome> {
    let d = &inst.decomposed;
    let start = Instant::now();
    let initial = initial_solution(d, &inst.roots, init)?;
    let init_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let out = search(d, &initial, params, false)?;
    let ls_ms = start.elapsed().as_secs_f64() * 1e3;
    let record = |algorithm: String, makespan: f64, runtime_ms: f64, iterations: usize| RunRecord {
        instance: inst.name.clone(),
        algorithm,
        seed: params.seed,
        makespan,
        runtime_ms,
        iterations,
    };
    Ok(RunOutcome {
        initial: record(init.to_string(), initial.makespan, init_ms, 0),
        improved: record(LS_ALGORITHM.to_string(), out.best.makespan, init_ms + ls_ms, out.iterations),
        solution: out.best,
    })
}

#[derive(Clone, Debug, Default)]
pub struct BenchOutcome {
    /// Paired initializer and search rows, sorted.
    pub records: Vec<RunRecord>,
    /// `(instance, seed, message)` of failed runs.
    pub failures: Vec<(String, u64, String)>,
}

pub fn run_bench(instances: &[Instance], cfg: &BenchConfig) -> Result<BenchOutcome> {
    if instances.is_empty() {
        return Err(Error::InvalidParameter("no instances to benchmark".into()));
    }
    if cfg.seeds.is_empty() {
        return Err(Error::InvalidParameter("no seeds to benchmark".into()));
    }
    let jobs: Vec<(&Instance, u64)> = instances
        .iter()
        .flat_map(|i| cfg.seeds.iter().map(move |&s| (i, s)))
        .collect();
    let results: Vec<(String, u64, Result<RunOutcome>)> = jobs
        .par_iter()
        .map(|&(inst, seed)| {
            let r = cfg.params(seed).and_then(|p| run_once(inst, cfg.init, &p));
            (inst.name.clone(), seed, r)
        })
        .collect();
    let mut out = BenchOutcome::default();
    for (name, seed, r) in results {
        match r {
            Ok(o) => {
                out.records.push(o.initial);
                out.records.push(o.improved);
            }
            Err(e) => out.failures.push((name, seed, e.to_string())),
        }
    }
    out.records.sort_by(|a, b| (&a.instance, &a.algorithm, a.seed).cmp(&(&b.instance, &b.algorithm, b.seed)));
    out.failures.sort();
    Ok(out)
}

/// Mean over paired runs of (initial − improved) / initial.
pub fn mean_relative_improvement(records: &[RunRecord], baseline: &str) -> Option<f64> {
    let gains: Vec<f64> = records
        .iter()
        .filter(|r| r.algorithm == LS_ALGORITHM)
        .filter_map(|ls| {
            records
                .iter()
                .find(|b| b.algorithm == baseline && b.instance == ls.instance && b.seed == ls.seed)
                .filter(|b| b.makespan > 0.0)
                .map(|b| (b.makespan - ls.makespan) / b.makespan)
        })
        .collect();
    (!gains.is_empty()).then(|| gains.iter().sum::<f64>() / gains.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::generate::{random_instance, GeneratorConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> Instance {
        let cfg = GeneratorConfig {
            width: 5,
            height: 4,
            robots: 2,
            ..GeneratorConfig::default()
        };
        random_instance("small", &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap()
    }

    #[test]
    fn one_instance_twelve_seeds() {
        let cfg = BenchConfig {
            max_iters: 30,
            ..BenchConfig::default()
        };
        let out = run_bench(&[small()], &cfg).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.records.len(), 24);
        let ls: Vec<_> = out.records.iter().filter(|r| r.algorithm == LS_ALGORITHM).collect();
        assert_eq!(ls.len(), 12);
        for r in &ls {
            let base = out
                .records
                .iter()
                .find(|b| b.algorithm == "greedy" && b.seed == r.seed)
                .unwrap();
            assert!(r.makespan <= base.makespan);
        }
        assert!(mean_relative_improvement(&out.records, "greedy").unwrap() >= 0.0);
    }

    #[test]
    fn empty_instance_list_rejected() {
        assert!(run_bench(&[], &BenchConfig::default()).is_err());
    }
}
