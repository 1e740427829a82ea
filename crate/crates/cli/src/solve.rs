use std::fmt::Write as _;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use stackmst::budgeted::{self, single_price_bound};
use stackmst::follower::run_follower;
use stackmst::oracle::{self, OracleError};
use stackmst::path_approx::{self, PathApproxError};
use stackmst::tree_approx::{self, TreeApproxError};
use stackmst::two_cost::{self, TwoCostError, TwoCostProfile};
use stackmst::{GameInstance, PricedSolution, Purchase, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Auto,
    TwoCost,
    PathApprox,
    TreeApprox,
    SinglePrice,
    LevelStar,
    Oracle,
}

impl Algo {
    pub const CONCRETE: [Algo; 6] = [
        Algo::Oracle,
        Algo::TwoCost,
        Algo::PathApprox,
        Algo::TreeApprox,
        Algo::SinglePrice,
        Algo::LevelStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::TwoCost => "two-cost",
            Algo::PathApprox => "path-approx",
            Algo::TreeApprox => "tree-approx",
            Algo::SinglePrice => "single-price",
            Algo::LevelStar => "level-star",
            Algo::Oracle => "oracle",
        }
    }

    /// Whether the algorithm's preconditions hold on `instance`.
    pub fn applies(self, instance: &GameInstance, guard: usize) -> bool {
        match self {
            Algo::Auto | Algo::SinglePrice | Algo::LevelStar => true,
            Algo::Oracle => instance.candidate_count() <= guard,
            Algo::TwoCost => instance.is_complete() && instance.tree().distinct_costs().len() <= 2,
            Algo::PathApprox => instance.is_complete() && instance.is_path(),
            Algo::TreeApprox => instance.is_complete(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub epsilon: f64,
    pub guard: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub algorithm: String,
    /// Follower revenue of `purchases`.
    pub revenue: Value,
    pub purchases: Vec<Purchase>,
    pub spend: Value,
    pub total_cost: Value,
    /// `c(T)` minus the two-cost penalty, on instances with at most two costs.
    pub two_cost_bound: Option<Value>,
    pub certified_ratio: Option<String>,
    pub notes: Vec<String>,
    pub wall_ms: f64,
}

impl SolveReport {
    pub fn solution(&self) -> PricedSolution {
        PricedSolution::new(self.purchases.iter().map(|p| (p.edge, p.price)))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algorithm        {}", self.algorithm);
        let _ = writeln!(out, "revenue          {} ({:.6})", self.revenue, self.revenue.to_f64());
        let _ = writeln!(out, "activation spend {}", self.spend);
        let _ = writeln!(out, "c(T)             {}", self.total_cost);
        if let Some(b) = self.two_cost_bound {
            let _ = writeln!(out, "two-cost bound   {b}");
        }
        if let Some(r) = &self.certified_ratio {
            let _ = writeln!(out, "certified ratio  {r}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "note             {note}");
        }
        let _ = writeln!(out, "wall time        {:.3} ms", self.wall_ms);
        for p in &self.purchases {
            let _ = writeln!(out, "buy {} {} {}", p.edge.u, p.edge.v, p.price);
        }
        out
    }
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        OracleError::Unscalable => CliError::Failed(e.to_string()),
    }
}

fn two_cost_error(e: TwoCostError) -> CliError {
    match e {
        TwoCostError::TooManyCosts(_) | TwoCostError::ForeignCost(_) | TwoCostError::Order { .. } => {
            CliError::TwoCost(e.to_string())
        }
        TwoCostError::Oracle(o) => oracle_error(o),
        other => CliError::NotApplicable(other.to_string()),
    }
}

fn path_error(e: PathApproxError) -> CliError {
    match e {
        PathApproxError::Oracle(o) => oracle_error(o),
        other => CliError::NotApplicable(other.to_string()),
    }
}

fn tree_error(e: TreeApproxError) -> CliError {
    match e {
        TreeApproxError::Oracle(o) => oracle_error(o),
        TreeApproxError::Epsilon => CliError::Usage(e.to_string()),
        other => CliError::NotApplicable(other.to_string()),
    }
}

fn two_cost_bound(instance: &GameInstance) -> Option<Value> {
    if !instance.is_complete() {
        return None;
    }
    let profile = TwoCostProfile::of(instance).ok()?;
    Some(instance.total_cost() - profile.penalty())
}

/// Runs one concrete algorithm; the revenue is always re-derived by the
/// follower.
fn run_concrete(instance: &GameInstance, algo: Algo, opts: SolveOptions) -> Result<SolveReport, CliError> {
    let start = Instant::now();
    let mut notes = Vec::new();
    let (solution, ratio) = match algo {
        Algo::Oracle => {
            let res = oracle::solve_exact(instance, opts.guard).map_err(oracle_error)?;
            notes.push(format!("{} blue sets priced", res.explored));
            (res.best_prices.solution(), Some("1".to_string()))
        }
        Algo::TwoCost => {
            let out = if instance.is_path() {
                two_cost::solve_two_cost_path(instance)
            } else {
                two_cost::solve_two_cost_tree(instance)
            }
            .map_err(two_cost_error)?;
            notes.push(format!("closed form {}", out.closed_form));
            if out.delegated {
                notes.push("small tree solved by the oracle".into());
            }
            (out.solution, Some("1".to_string()))
        }
        Algo::PathApprox => {
            let out = path_approx::solve_path_approx(instance).map_err(path_error)?;
            let ratio = match &out.report {
                Some(r) => {
                    notes.push(format!(
                        "candidate revenues {}, {}, {}",
                        r.simulated[0], r.simulated[1], r.simulated[2]
                    ));
                    r.certified_ratio.to_string()
                }
                None => {
                    notes.push("short path solved by the oracle".into());
                    "1".to_string()
                }
            };
            (out.solution, Some(ratio))
        }
        Algo::TreeApprox => {
            let out = tree_approx::solve_tree_approx(instance, opts.epsilon, opts.guard).map_err(tree_error)?;
            let ratio = match &out.report {
                Some(r) => {
                    notes.push(format!("root {}, {} pieces", r.partition.root, r.partition.parts.len()));
                    r.certified_ratio.map(|v| v.to_string())
                }
                None => {
                    notes.push("small tree solved by the oracle".into());
                    Some("1".to_string())
                }
            };
            (out.solution, ratio)
        }
        Algo::SinglePrice => {
            let out = budgeted::single_price(instance);
            if let Some(p) = out.price {
                notes.push(format!("uniform price {p}"));
            }
            let beta = instance.n().saturating_sub(1);
            (out.solution, Some(format!("{:.6}", single_price_bound(instance, beta))))
        }
        Algo::LevelStar => {
            let out = budgeted::solve_level_star(instance, opts.epsilon).map_err(|e| CliError::Usage(e.to_string()))?;
            notes.push(format!("center {}, radius {}", out.center, out.radius));
            for level in &out.levels {
                notes.push(format!("level {} revenue {}", level.level, level.revenue));
            }
            (out.solution, Some(format!("{}", out.certified_factor)))
        }
        Algo::Auto => unreachable!("auto is resolved by solve"),
    };
    let follower = run_follower(instance, &solution).map_err(|e| CliError::Failed(e.to_string()))?;
    let spend = solution.spend(instance).ok_or_else(|| CliError::Failed("solution uses a non-candidate".into()))?;
    if !instance.budget().allows(spend) {
        return Err(CliError::Failed(format!("{} overspent the budget", algo.name())));
    }
    Ok(SolveReport {
        algorithm: algo.name().to_string(),
        revenue: follower.revenue,
        spend,
        purchases: solution.entries,
        total_cost: instance.total_cost(),
        two_cost_bound: two_cost_bound(instance),
        certified_ratio: ratio,
        notes,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// `auto` runs every applicable algorithm and keeps the best revenue, the
/// earliest in [`Algo::CONCRETE`] order on ties.
pub fn solve(instance: &GameInstance, algo: Algo, opts: SolveOptions) -> Result<SolveReport, CliError> {
    if algo != Algo::Auto {
        return run_concrete(instance, algo, opts);
    }
    let start = Instant::now();
    let mut best: Option<SolveReport> = None;
    let mut tried = Vec::new();
    for a in Algo::CONCRETE {
        if !a.applies(instance, opts.guard) {
            continue;
        }
        match run_concrete(instance, a, opts) {
            Ok(r) => {
                tried.push(format!("{}={}", a.name(), r.revenue));
                if best.as_ref().is_none_or(|b| r.revenue > b.revenue) {
                    best = Some(r);
                }
            }
            Err(e) => tried.push(format!("{}: {e}", a.name())),
        }
    }
    let mut report = best.ok_or_else(|| CliError::Failed("no algorithm succeeded".into()))?;
    report.notes.insert(0, format!("tried {}", tried.join(", ")));
    report.algorithm = format!("auto ({})", report.algorithm);
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
