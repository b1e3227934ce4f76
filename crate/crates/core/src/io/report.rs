//! Run records, CSV output with per-group mean±std rows, and a plain-text
//! summary table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const CSV_COLUMNS: [&str; 8] = [
    "instance",
    "algorithm",
    "seed",
    "makespan",
    "runtime_ms",
    "iterations",
    "makespan_std",
    "runtime_ms_std",
];

/// Seed column value of aggregate rows.
pub const AGGREGATE_SEED: &str = "mean±std";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub makespan: f64,
    pub runtime_ms: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub instance: String,
    pub algorithm: String,
    pub runs: usize,
    pub makespan_mean: f64,
    pub makespan_std: f64,
    pub runtime_mean: f64,
    pub runtime_std: f64,
    pub iterations_mean: f64,
}

/// Mean and sample standard deviation; the deviation of one sample is 0.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn sorted(records: &[RunRecord]) -> Vec<RunRecord> {
    let mut r = records.to_vec();
    r.sort_by(|a, b| {
        (&a.instance, &a.algorithm, a.seed).cmp(&(&b.instance, &b.algorithm, b.seed))
    });
    r
}

/// Groups by (instance, algorithm) in sorted order.
pub fn aggregate(records: &[RunRecord]) -> Vec<Aggregate> {
    let mut groups: BTreeMap<(String, String), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.instance.clone(), r.algorithm.clone())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((instance, algorithm), rs)| {
            let ms: Vec<f64> = rs.iter().map(|r| r.makespan).collect();
            let rt: Vec<f64> = rs.iter().map(|r| r.runtime_ms).collect();
            let (makespan_mean, makespan_std) = mean_std(&ms);
            let (runtime_mean, runtime_std) = mean_std(&rt);
            Aggregate {
                instance,
                algorithm,
                runs: rs.len(),
                makespan_mean,
                makespan_std,
                runtime_mean,
                runtime_std,
                iterations_mean: rs.iter().map(|r| r.iterations as f64).sum::<f64>() / rs.len() as f64,
            }
        })
        .collect()
}

/// CSV text: every run, then one aggregate row per group after its runs.
pub fn write_results(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    let runs = sorted(records);
    for agg in aggregate(&runs) {
        for r in runs
            .iter()
            .filter(|r| r.instance == agg.instance && r.algorithm == agg.algorithm)
        {
            w.write_record([
                r.instance.clone(),
                r.algorithm.clone(),
                r.seed.to_string(),
                r.makespan.to_string(),
                format!("{:.3}", r.runtime_ms),
                r.iterations.to_string(),
                String::new(),
                String::new(),
            ])?;
        }
        w.write_record([
            agg.instance.clone(),
            agg.algorithm.clone(),
            AGGREGATE_SEED.to_string(),
            agg.makespan_mean.to_string(),
            format!("{:.3}", agg.runtime_mean),
            agg.iterations_mean.to_string(),
            agg.makespan_std.to_string(),
            format!("{:.3}", agg.runtime_std),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Per-instance table: one column per algorithm holding makespan mean±std
/// with the runtime mean±std (ms) on the line below.
pub fn report_text(records: &[RunRecord]) -> String {
    let aggs = aggregate(records);
    let mut algorithms: Vec<&str> = aggs.iter().map(|a| a.algorithm.as_str()).collect();
    algorithms.sort_unstable();
    algorithms.dedup();
    let mut instances: Vec<&str> = aggs.iter().map(|a| a.instance.as_str()).collect();
    instances.dedup();

    let cell = |inst: &str, alg: &str, top: bool| -> String {
        aggs.iter()
            .find(|a| a.instance == inst && a.algorithm == alg)
            .map_or_else(
                || "-".to_string(),
                |a| {
                    if top {
                        format!("{:.2}±{:.2}", a.makespan_mean, a.makespan_std)
                    } else {
                        format!("({:.1}±{:.1} ms)", a.runtime_mean, a.runtime_std)
                    }
                },
            )
    };
    let name_w = instances.iter().map(|s| s.chars().count()).max().unwrap_or(0).max(8);
    let col_w = algorithms
        .iter()
        .map(|alg| {
            instances
                .iter()
                .flat_map(|i| [cell(i, alg, true), cell(i, alg, false)])
                .map(|s| s.chars().count())
                .chain([alg.len()])
                .max()
                .unwrap_or(0)
        })
        .collect::<Vec<_>>();

    let mut out = String::new();
    let _ = write!(out, "{:<name_w$}", "instance");
    for (alg, w) in algorithms.iter().zip(&col_w) {
        let _ = write!(out, "  {alg:>w$}");
    }
    out.push('\n');
    for inst in &instances {
        for top in [true, false] {
            let _ = write!(out, "{:<name_w$}", if top { *inst } else { "" });
            for (alg, w) in algorithms.iter().zip(&col_w) {
                let _ = write!(out, "  {:>w$}", cell(inst, alg, top));
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(seed: u64, makespan: f64) -> RunRecord {
        RunRecord {
            instance: "i".into(),
            algorithm: "ls".into(),
            seed,
            makespan,
            runtime_ms: 10.0,
            iterations: 100,
        }
    }

    #[test]
    fn one_run_gives_one_data_and_one_aggregate_row() {
        let csv = write_results(&[rec(0, 3.0)]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert!(lines[2].contains(AGGREGATE_SEED));
        assert!(lines[2].ends_with(",0,0.000"));
    }

    #[test]
    fn identical_makespans_have_zero_std() {
        let runs: Vec<RunRecord> = (0..12).map(|s| rec(s, 7.25)).collect();
        let agg = aggregate(&runs);
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].makespan_std, 0.0);
        assert_eq!(agg[0].runs, 12);
        assert_eq!(write_results(&runs).unwrap().lines().count(), 14);
    }

    #[test]
    fn mean_of_two() {
        let (m, s) = mean_std(&[16.5, 17.0]);
        assert_eq!(m, 16.75);
        assert!((s - 0.125f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn output_is_order_independent() {
        let mut runs: Vec<RunRecord> = (0..4).map(|s| rec(s, s as f64)).collect();
        let a = write_results(&runs).unwrap();
        runs.reverse();
        assert_eq!(a, write_results(&runs).unwrap());
    }

    #[test]
    fn text_report_has_two_lines_per_instance() {
        let mut runs = vec![rec(0, 3.0), rec(1, 5.0)];
        runs.push(RunRecord {
            algorithm: "init".into(),
            ..rec(0, 9.0)
        });
        let text = report_text(&runs);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].contains("4.00±1.41"));
        assert!(lines[2].contains("ms)"));
    }
}
