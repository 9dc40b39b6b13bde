//! The `varisk` command line.
//!
//! Every subcommand prints one JSON record on success (`plot-data` can print
//! CSV instead). Exit status is 0 on success, 2 for usage errors including bad
//! scenario files, and 1 when the computation itself fails; in both failure
//! cases the error name leads the message on stderr.

mod scenario;
mod tasks;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use scenario::{load_scenario, parse_scenario, Scenario, ScenarioError, TaskSpec};
pub use tasks::{Context, Job, Outcome, Preference};

use crate::aggregation::{ConvolutionSettings, Dependence};
use crate::distributions::Distribution;
use crate::diversification::{g_curve_csv, CROSSOVER_GRID, DEFAULT_TOLERANCE};
use crate::risk_measures::LossPosition;
use scenario::{DEFAULT_ORACLE_SAMPLES, DEFAULT_PLOT_POINTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "varisk",
    version,
    about = "Value-at-Risk of single and aggregated losses, and whether pooling them helps",
    args_conflicts_with_subcommands = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Run every task of a JSON scenario file
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format; csv is available for plot-data only
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for randomized commands; overrides a scenario's seed [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Relative band inside which compare reports "neutral"
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,

    /// Absolute tolerance of the convolution integral
    #[arg(long, global = true, value_parser = positive)]
    abs_tol: Option<f64>,

    /// Split budget of the convolution integral
    #[arg(long, global = true, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_subdivisions: Option<usize>,

    /// Always integrate numerically, even for pairs with a closed form
    #[arg(long, global = true)]
    no_fast_paths: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DependenceArg {
    Comonotone,
    Independent,
}

impl From<DependenceArg> for Dependence {
    fn from(d: DependenceArg) -> Self {
        match d {
            DependenceArg::Comonotone => Dependence::Comonotone,
            DependenceArg::Independent => Dependence::Independent,
        }
    }
}

#[derive(Debug, Args)]
struct PairArgs {
    /// First loss, e.g. pareto:1,1, exp:1, normal:0,1, gamma:2,1 or a JSON object
    #[arg(long, value_parser = distribution)]
    x: Distribution,

    /// Second loss, same syntax as --x
    #[arg(long, value_parser = distribution)]
    y: Distribution,
}

impl PairArgs {
    fn positions(&self) -> (LossPosition, LossPosition) {
        (LossPosition::new("x", self.x.clone()), LossPosition::new("y", self.y.clone()))
    }
}

#[derive(Debug, Args)]
struct SumArgs {
    #[command(flatten)]
    pair: PairArgs,

    /// Further components after x and y (comonotone sums and oracle only)
    #[arg(long = "also", value_name = "DIST", value_parser = distribution)]
    more: Vec<Distribution>,

    #[arg(long, value_enum)]
    dep: DependenceArg,
}

impl SumArgs {
    fn components(&self) -> Vec<LossPosition> {
        let (x, y) = self.pair.positions();
        let rest = self
            .more
            .iter()
            .enumerate()
            .map(|(i, d)| LossPosition::new(format!("x{}", i + 3), d.clone()));
        [x, y].into_iter().chain(rest).collect()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// VaR, median and excess VaR of one loss
    Var {
        #[arg(long, value_parser = distribution)]
        x: Distribution,
        #[arg(long, value_parser = alpha)]
        alpha: f64,
    },
    /// VaR of a sum of losses under one dependence mode
    Aggregate {
        #[command(flatten)]
        sum: SumArgs,
        #[arg(long, value_parser = alpha)]
        alpha: f64,
    },
    /// VaR of the sum against the sum of VaRs, with a verdict
    Compare {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = DependenceArg::Independent)]
        dep: DependenceArg,
        #[arg(long, value_parser = alpha)]
        alpha: f64,
    },
    /// Levels where VaR of an independent sum equals the sum of VaRs
    Crossover {
        #[command(flatten)]
        pair: PairArgs,
        /// Points of the sign scan before refinement
        #[arg(long, default_value_t = CROSSOVER_GRID, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        grid: usize,
    },
    /// g(alpha) = F_{X+Y}(VaR(X) + VaR(Y)) on an even grid, for plotting
    PlotData {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_PLOT_POINTS, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        points: usize,
    },
    /// One basket or two: the discrete eggs problem
    Eggs {
        /// Eggs per basket when split (2n in total)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Failure probability of the single basket
        #[arg(long, value_parser = probability)]
        theta1: f64,
        /// Failure probability of each of the two baskets
        #[arg(long, value_parser = probability)]
        theta2: f64,
    },
    /// Monte Carlo VaR with a 99% interval, checked against the analytic value
    Oracle {
        #[command(flatten)]
        sum: SumArgs,
        #[arg(long, value_parser = alpha)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_ORACLE_SAMPLES, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(10_000..))]
        samples: usize,
    },
}

fn distribution(s: &str) -> Result<Distribution, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err("alpha must lie in (0,1)".into())
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err("must lie in (0,1)".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

/// Why a run stopped early, and which exit code that maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Computation(String),
}

impl Failure {
    fn usage(name: &str, detail: impl std::fmt::Display) -> Self {
        Failure::Usage(format!("{name}: {detail}"))
    }

    fn computation(e: &crate::Error) -> Self {
        Failure::Computation(format!("{}: {}", e.name(), e.detail()))
    }
}

#[derive(Serialize)]
struct ScenarioOutput {
    seed: u64,
    results: Vec<Outcome>,
}

/// Runs the command line given by `args` (program name first) against the
/// process's stdout and stderr and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "UsageError: {text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => match emit(cli.common.out.as_deref(), stdout, &text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "IoError: {e}");
                EXIT_COMPUTATION
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_USAGE
        }
        Err(Failure::Computation(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_COMPUTATION
        }
    }
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn settings(common: &Common, base: ConvolutionSettings) -> Result<ConvolutionSettings, Failure> {
    let mut s = base;
    if let Some(t) = common.abs_tol {
        s.abs_tolerance = t;
    }
    if let Some(m) = common.max_subdivisions {
        s.max_subdivisions = m;
    }
    if common.no_fast_paths {
        s.use_fast_paths = false;
    }
    s.validate().map_err(|e| Failure::usage(e.name(), e.detail()))?;
    Ok(s)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("outputs hold only finite numbers and strings");
    text.push('\n');
    text
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let common = &cli.common;
    if let Some(path) = &cli.scenario {
        if common.format == Format::Csv {
            return Err(Failure::usage("UsageError", "--format csv is not available for scenario runs"));
        }
        let scenario = load_scenario(path).map_err(|e| Failure::usage(e.name(), &e))?;
        let jobs = scenario.jobs().map_err(|e| Failure::usage(e.name(), &e))?;
        let ctx = Context {
            settings: settings(common, scenario.settings)?,
            seed: common.seed.or(scenario.seed).unwrap_or(0),
        };
        let results = jobs
            .iter()
            .map(|j| j.execute(&ctx))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(|e| Failure::computation(&e))?;
        return Ok(to_json(&ScenarioOutput { seed: ctx.seed, results }));
    }

    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| Failure::usage("UsageError", "a subcommand or --scenario is required"))?;
    let ctx = Context { settings: settings(common, ConvolutionSettings::default())?, seed: common.seed.unwrap_or(0) };
    let job = job_for(command, common)?;
    if common.format == Format::Csv && !matches!(job, Job::PlotData { .. }) {
        return Err(Failure::usage("UsageError", "--format csv is only available for plot-data"));
    }
    let outcome = job.execute(&ctx).map_err(|e| Failure::computation(&e))?;
    Ok(match (&outcome, common.format) {
        (Outcome::PlotData(p), Format::Csv) => g_curve_csv(&p.points),
        _ => to_json(&outcome),
    })
}

fn job_for(command: &Command, common: &Common) -> Result<Job, Failure> {
    Ok(match command {
        Command::Var { x, alpha } => Job::Var { x: LossPosition::new("x", x.clone()), alpha: *alpha },
        Command::Aggregate { sum, alpha } => {
            let dependence = sum.dep.into();
            let components = sum.components();
            if dependence == Dependence::Independent && components.len() != 2 {
                return Err(Failure::usage("UsageError", "independent aggregation takes exactly --x and --y"));
            }
            Job::Aggregate { components, dependence, alpha: *alpha }
        }
        Command::Compare { pair, dep, alpha } => {
            let (x, y) = pair.positions();
            Job::Compare {
                x,
                y,
                dependence: (*dep).into(),
                alpha: *alpha,
                tolerance: common.tol.unwrap_or(DEFAULT_TOLERANCE),
            }
        }
        Command::Crossover { pair, grid } => {
            let (x, y) = pair.positions();
            Job::Crossover { x, y, grid: *grid }
        }
        Command::PlotData { pair, points } => {
            let (x, y) = pair.positions();
            Job::PlotData { x, y, points: *points }
        }
        Command::Eggs { n, theta1, theta2 } => Job::Eggs { n: *n, theta1: *theta1, theta2: *theta2 },
        Command::Oracle { sum, alpha, samples } => Job::Oracle {
            components: sum.components(),
            dependence: sum.dep.into(),
            alpha: *alpha,
            samples: *samples,
        },
    })
}
