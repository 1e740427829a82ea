use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::thread;

use serde::Serialize;

use stackmst::oracle;
use stackmst::{GameInstance, Value};

use crate::solve::{solve, Algo, SolveOptions};

#[derive(Clone, Debug, Serialize)]
pub struct AlgoResult {
    pub revenue: Option<Value>,
    /// `oracle / revenue`, when the oracle ran and the revenue is positive.
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub instance: String,
    pub n: usize,
    pub oracle: Option<Value>,
    pub results: BTreeMap<String, AlgoResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareSummary {
    pub instances: usize,
    /// Worst ratio per algorithm over instances with an oracle value.
    pub worst_ratio: BTreeMap<String, f64>,
}

fn compare_one(name: String, instance: &GameInstance, algos: &[Algo], opts: SolveOptions) -> CompareRow {
    let oracle = (instance.candidate_count() <= opts.guard)
        .then(|| oracle::solve_exact(instance, opts.guard).ok().map(|r| r.optimum))
        .flatten();
    let mut results = BTreeMap::new();
    for &algo in algos {
        let entry = match solve(instance, algo, opts) {
            Ok(report) => {
                let ratio = match oracle {
                    Some(opt) if !report.revenue.is_zero() => Some((opt / report.revenue).to_f64()),
                    Some(opt) if opt.is_zero() => Some(1.0),
                    Some(_) => Some(f64::INFINITY),
                    None => None,
                };
                AlgoResult {
                    revenue: Some(report.revenue),
                    ratio,
                    error: None,
                }
            }
            Err(e) => AlgoResult {
                revenue: None,
                ratio: None,
                error: Some(e.to_string()),
            },
        };
        results.insert(algo.name().to_string(), entry);
    }
    CompareRow {
        instance: name,
        n: instance.n(),
        oracle,
        results,
    }
}

/// Rows in input order; instances are spread over worker threads.
pub fn compare(instances: &[(PathBuf, GameInstance)], algos: &[Algo], opts: SolveOptions) -> (Vec<CompareRow>, CompareSummary) {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(instances.len().max(1));
    let mut rows: Vec<Option<CompareRow>> = vec![None; instances.len()];
    thread::scope(|scope| {
        let chunk = instances.len().div_ceil(workers).max(1);
        let handles: Vec<_> = instances
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                scope.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(i, (path, inst))| (c * chunk + i, compare_one(path.display().to_string(), inst, algos, opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, row) in h.join().expect("compare worker panicked") {
                rows[i] = Some(row);
            }
        }
    });
    let rows: Vec<CompareRow> = rows.into_iter().map(|r| r.expect("every row filled")).collect();
    let mut worst_ratio: BTreeMap<String, f64> = BTreeMap::new();
    for row in &rows {
        for (name, res) in &row.results {
            if let Some(r) = res.ratio {
                let w = worst_ratio.entry(name.clone()).or_insert(1.0);
                *w = w.max(r);
            }
        }
    }
    let summary = CompareSummary {
        instances: rows.len(),
        worst_ratio,
    };
    (rows, summary)
}

pub fn table(rows: &[CompareRow], summary: &CompareSummary, algos: &[Algo]) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<32} {:>3} {:>12}", "instance", "n", "oracle");
    for a in algos {
        let _ = write!(out, " {:>20}", a.name());
    }
    out.push('\n');
    for row in rows {
        let oracle = row.oracle.map_or("-".to_string(), |v| v.to_string());
        let _ = write!(out, "{:<32} {:>3} {:>12}", row.instance, row.n, oracle);
        for a in algos {
            let cell = match &row.results[a.name()] {
                AlgoResult { revenue: Some(r), ratio: Some(q), .. } => format!("{r} ({q:.3})"),
                AlgoResult { revenue: Some(r), .. } => r.to_string(),
                _ => "n/a".to_string(),
            };
            let _ = write!(out, " {cell:>20}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "instances: {}", summary.instances);
    for (name, w) in &summary.worst_ratio {
        let _ = writeln!(out, "worst ratio {name}: {w:.6}");
    }
    out
}
