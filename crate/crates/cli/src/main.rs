mod compare;
mod solve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stackmst::follower::run_follower;
use stackmst::model::generate::{self, CostModel, SetSystem};
use stackmst::model::{check_solution, format_instance, format_solution, parse_instance, parse_solution};
use stackmst::oracle::DEFAULT_GUARD;
use stackmst::pricing::optimal_prices;
use stackmst::{EdgeKey, GameInstance, Value};

use crate::solve::{Algo, SolveOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    TwoCost(String),
    #[error("{0}")]
    NotApplicable(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
            CliError::TwoCost(_) => 4,
            CliError::NotApplicable(_) | CliError::Failed(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "stackmst", version, about = "Stackelberg minimum spanning tree pricing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Tree,
    Path,
    TwoCostTree,
    TwoCostPath,
    Budgeted,
    SetcoverPath,
    SetcoverStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Costs {
    Int,
    Real,
}

#[derive(clap::Args, Clone, Copy)]
struct SolverArgs {
    /// Accuracy for tree-approx's oracle threshold and level-star.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Largest candidate count the exhaustive oracle accepts.
    #[arg(long, env = "STACKMST_GUARD", default_value_t = DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            epsilon: self.epsilon,
            guard: self.guard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write random or structured instances.
    Generate {
        #[arg(long, value_enum, default_value_t = Kind::Tree)]
        kind: Kind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Costs::Int)]
        costs: Costs,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 9.0)]
        hi: f64,
        /// Cheap cost of two-cost instances.
        #[arg(long, default_value = "1")]
        a: Value,
        /// Expensive cost of two-cost instances.
        #[arg(long, default_value = "2")]
        b: Value,
        /// Probability that a two-cost edge gets cost `a`.
        #[arg(long, default_value_t = 0.5)]
        a_share: f64,
        /// Explicit blue candidates of budgeted instances.
        #[arg(long, default_value_t = 12)]
        blues: usize,
        #[arg(long, default_value_t = 5)]
        max_activation: i64,
        /// Universe size of set-cover instances.
        #[arg(long, default_value_t = 3)]
        universe: usize,
        /// Subsets as `0,2;1,2;2`; each must contain the last element.
        #[arg(long)]
        sets: Option<String>,
        /// Number of instances, seeds `seed..seed+count`; needs `--out-dir` when above 1.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Solve an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also write the solution in `buy` format.
        #[arg(long)]
        solution_out: Option<PathBuf>,
    },
    /// Check a solution against an instance by simulating the follower.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Optimal prices for a given blue set.
    Price {
        instance: PathBuf,
        /// Blue edges as `u-v,u-v`.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
    },
    /// Run algorithms over instance files or directories of `.inst` files.
    Compare {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::TwoCost, Algo::PathApprox, Algo::TreeApprox, Algo::SinglePrice, Algo::LevelStar])]
        algos: Vec<Algo>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GameInstance, CliError> {
    let raw = parse_instance(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    GameInstance::new(raw.tree, raw.blues, raw.budget).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}

fn parse_sets(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad element `{t}`"))))
                .collect()
        })
        .collect()
}

fn parse_edge(text: &str) -> Result<EdgeKey, CliError> {
    let bad = || CliError::Usage(format!("bad edge `{text}`, expected u-v"));
    let (u, v) = text.trim().split_once('-').ok_or_else(bad)?;
    Ok(EdgeKey::new(u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?))
}

#[allow(clippy::too_many_arguments)]
fn generate_one(
    kind: Kind,
    n: usize,
    seed: u64,
    model: CostModel,
    two_cost: CostModel,
    blues: usize,
    max_activation: i64,
    system: &SetSystem,
) -> Result<GameInstance, CliError> {
    let made = match kind {
        Kind::Tree => generate::random_tree(n, model, seed),
        Kind::Path => generate::random_path(n, model, seed),
        Kind::TwoCostTree => generate::random_tree(n, two_cost, seed),
        Kind::TwoCostPath => generate::random_path(n, two_cost, seed),
        Kind::Budgeted => generate::random_budgeted(n, model, blues, max_activation, seed),
        Kind::SetcoverPath => generate::setcover_path(system),
        Kind::SetcoverStar => generate::setcover_star(system),
    };
    made.map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            seed,
            costs,
            lo,
            hi,
            a,
            b,
            a_share,
            blues,
            max_activation,
            universe,
            sets,
            count,
            out_dir,
        } => {
            let model = match costs {
                Costs::Int => CostModel::IntRange {
                    lo: lo as i64,
                    hi: hi as i64,
                },
                Costs::Real => CostModel::UniformReal { lo, hi },
            };
            let two_cost = CostModel::TwoCost { a, b, a_share };
            let system = SetSystem {
                universe,
                sets: match sets {
                    Some(s) => parse_sets(&s)?,
                    None => vec![(0..universe).collect()],
                },
            };
            if count > 1 && out_dir.is_none() {
                return Err(CliError::Usage("--count above 1 needs --out-dir".into()));
            }
            let mut written = String::new();
            for s in seed..seed + count {
                let inst = generate_one(kind, n, s, model, two_cost, blues, max_activation, &system)?;
                let text = format_instance(inst.raw());
                match &out_dir {
                    Some(dir) => {
                        fs::create_dir_all(dir).map_err(|e| CliError::Input(e.to_string()))?;
                        let name = format!("{}-{n}-{s}.inst", kind.to_possible_value().expect("named").get_name());
                        let path = dir.join(name);
                        fs::write(&path, text).map_err(|e| CliError::Input(e.to_string()))?;
                        written.push_str(&format!("{}\n", path.display()));
                    }
                    None => written.push_str(&text),
                }
            }
            Ok(written)
        }
        Command::Solve {
            instance,
            algo,
            solver,
            solution_out,
        } => {
            let inst = load(&instance)?;
            let report = solve::solve(&inst, algo, solver.options())?;
            if let Some(path) = solution_out {
                fs::write(&path, format_solution(&report.solution())).map_err(|e| CliError::Input(e.to_string()))?;
            }
            Ok(match solver.format {
                Format::Table => report.to_table(),
                Format::JsonLines => json_line(&report) + "\n",
            })
        }
        Command::Verify { instance, solution } => {
            let inst = load(&instance)?;
            let sol = parse_solution(&read(&solution)?).map_err(|e| CliError::Input(format!("{}: {e}", solution.display())))?;
            let issues = check_solution(&inst, &sol);
            let mut out = String::new();
            if !issues.is_empty() {
                for issue in &issues {
                    out.push_str(&format!("infeasible: {issue}\n"));
                }
                return Err(CliError::Failed(out.trim_end().to_string()));
            }
            let f = run_follower(&inst, &sol).map_err(|e| CliError::Failed(e.to_string()))?;
            let bought = f.purchased();
            let optimal = optimal_prices(&inst, &sol.keys()).map_err(|e| CliError::Failed(e.to_string()))?;
            let mut missing = 0;
            for p in &sol.entries {
                if !bought.contains(&p.edge) {
                    missing += 1;
                    let cap = optimal.price_of(p.edge).expect("priced");
                    out.push_str(&format!(
                        "edge {} not purchased by follower (price {} above its optimum {cap})\n",
                        p.edge, p.price
                    ));
                }
            }
            out.push_str(&format!("simulated revenue {}\n", f.revenue));
            if missing > 0 {
                return Err(CliError::Failed(out.trim_end().to_string()));
            }
            if f.revenue == sol.listed_revenue() {
                out.push_str("feasible, revenue matches\n");
            }
            if f.revenue < optimal.revenue {
                out.push_str(&format!("prices can rise: optimal pricing of this set earns {}\n", optimal.revenue));
            }
            Ok(out)
        }
        Command::Price { instance, edges } => {
            let inst = load(&instance)?;
            let keys: Vec<EdgeKey> = edges.iter().map(|e| parse_edge(e)).collect::<Result<_, _>>()?;
            let priced = optimal_prices(&inst, &keys).map_err(|e| CliError::Usage(e.to_string()))?;
            let f = run_follower(&inst, &priced.solution()).map_err(|e| CliError::Failed(e.to_string()))?;
            let mut out = format_solution(&priced.solution());
            out.push_str(&format!("# revenue {}\n", f.revenue));
            Ok(out)
        }
        Command::Compare { inputs, algos, solver } => {
            let mut files = Vec::new();
            for input in inputs {
                if input.is_dir() {
                    let mut found: Vec<PathBuf> = fs::read_dir(&input)
                        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
                        .collect();
                    found.sort();
                    files.extend(found);
                } else {
                    files.push(input);
                }
            }
            let instances: Vec<(PathBuf, GameInstance)> =
                files.into_iter().map(|p| load(&p).map(|i| (p, i))).collect::<Result<_, _>>()?;
            let (rows, summary) = compare::compare(&instances, &algos, solver.options());
            Ok(match solver.format {
                Format::Table => compare::table(&rows, &summary, &algos),
                Format::JsonLines => {
                    let mut out = String::new();
                    for row in &rows {
                        out.push_str(&json_line(row));
                        out.push('\n');
                    }
                    out.push_str(&json_line(&summary));
                    out.push('\n');
                    out
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("stackmst: {e}");
            ExitCode::from(e.code())
        }
    }
}
