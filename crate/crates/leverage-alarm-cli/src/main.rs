//! `leverage-alarm` — command-line front end for leverage-diffusion
//! insolvency analytics: calibrate a firm model from market CSVs, tabulate
//! alarm/insolvency probabilities, dump density curves for plotting, pick
//! alarm thresholds analytically or by strategy simulation, and compute the
//! WACC discount rate.

mod commands;
mod io;
mod report;

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  2  input or validation error
  3  numerical failure (non-convergence)

All outputs are deterministic given the inputs (and --seed where one
applies); re-running a command reproduces its output byte for byte.
Simulation uses every core by default; set RAYON_NUM_THREADS to override
(results do not depend on the thread count).";

#[derive(Parser)]
#[command(
    name = "leverage-alarm",
    version,
    about = "Leverage-ratio insolvency alarms: calibration, last-passage analysis, \
             threshold optimization, and strategy simulation",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate drift/volatility from market CSVs and write a model file
    Calibrate(CalibrateArgs),
    /// Tabulate alarm and insolvency probabilities over thresholds R* and horizons t
    Analyze(AnalyzeArgs),
    /// Dump a density curve (last-passage time or time to insolvency) as CSV
    Density(DensityArgs),
    /// Choose the alarm threshold: analytic objective, gamma sweep, or simulation
    Optimize(OptimizeArgs),
    /// Weighted average cost of capital from balance-sheet inputs
    Wacc(WaccArgs),
}

#[derive(Args)]
pub struct CalibrateArgs {
    /// Daily equity values CSV (columns: date, equity_value)
    #[arg(long, value_name = "FILE")]
    pub equity: PathBuf,
    /// Debt values CSV at reporting dates (columns: date, debt_value)
    #[arg(long, value_name = "FILE")]
    pub debt: PathBuf,
    /// Daily index returns CSV (columns: date, return)
    #[arg(long, value_name = "FILE")]
    pub index: PathBuf,
    /// Annualized risk-free rate
    #[arg(long, value_name = "RATE", allow_negative_numbers = true)]
    pub risk_free: f64,
    /// Trailing equity observations to calibrate on (at least 60)
    #[arg(long, value_name = "N")]
    pub window: usize,
    /// Firm label echoed into outputs (default: equity file stem)
    #[arg(long, value_name = "NAME")]
    pub firm: Option<String>,
    /// Model JSON output path (default: stdout)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Model JSON produced by `calibrate` (or written by hand)
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Alarm thresholds R* (> 1), comma separated
    #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
    pub rstar: Vec<f64>,
    /// Horizons t in years, comma separated
    #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    /// Embed a last-passage density curve per R* with this many points
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub curve_points: usize,
    /// Also write the table as CSV
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Report JSON output path (default: stdout)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CurveKindArg {
    /// Density of the last time the alarm level is visited
    LastPassage,
    /// Density of insolvency time minus last-alarm time
    TimeToDefault,
}

#[derive(Args)]
#[command(group(ArgGroup::new("level").required(true).args(["alpha", "rstar"])))]
pub struct DensityArgs {
    /// Model JSON produced by `calibrate` (or written by hand)
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Alarm level on the standardized log scale (must exceed c)
    #[arg(long, value_name = "LEVEL", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Alarm threshold R* (> 1); alternative to --alpha
    #[arg(long, value_name = "RATIO")]
    pub rstar: Option<f64>,
    /// Which density to tabulate
    #[arg(long, value_enum, value_name = "KIND")]
    pub kind: CurveKindArg,
    /// Smallest time on the geometric grid
    #[arg(long, value_name = "T", default_value_t = 1e-3)]
    pub t_min: f64,
    /// Largest time on the geometric grid (default: curve-specific tail)
    #[arg(long, value_name = "T")]
    pub t_max: Option<f64>,
    /// Number of grid points
    #[arg(long, value_name = "N", default_value_t = 400)]
    pub points: usize,
    /// Curve CSV output path (default: stdout)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    /// Keep (nu, sigma) fixed
    NoChange,
    /// Creditor-friendly deleveraging while the alarm is on
    Creditors,
    /// Shareholder-friendly risk-taking while the alarm is on
    Shareholders,
}

#[derive(Args)]
#[command(group(ArgGroup::new("rate").required(true).args(["q", "wacc_inputs"])))]
#[command(group(ArgGroup::new("weight").required(true).args(["gamma", "gamma_sweep"])))]
pub struct OptimizeArgs {
    /// Model JSON produced by `calibrate` (or written by hand)
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Objective horizon t in years
    #[arg(long, value_name = "T")]
    pub t: f64,
    /// Occupation discount rate q (> 0)
    #[arg(long, value_name = "RATE")]
    pub q: Option<f64>,
    /// Derive q from a WACC inputs CSV instead of --q
    #[arg(long, value_name = "FILE")]
    pub wacc_inputs: Option<PathBuf>,
    /// Weight between alarm-sensitivity and distress terms, in [0, 1]
    #[arg(long, value_name = "G")]
    pub gamma: Option<f64>,
    /// Sweep gamma over START:END:STEP and emit a CSV of optima
    #[arg(long, value_name = "START:END:STEP", conflicts_with = "simulate")]
    pub gamma_sweep: Option<String>,
    /// Analytic search grid resolution (at least 100)
    #[arg(long, value_name = "N", default_value_t = 201)]
    pub grid_points: usize,
    /// Optimize R* by Monte Carlo strategy simulation instead
    #[arg(long, requires = "strategy")]
    pub simulate: bool,
    /// Balance-sheet response while leverage sits at or below R*
    #[arg(long, value_enum, value_name = "MODE", requires = "simulate")]
    pub strategy: Option<StrategyArg>,
    /// Drift adjustment applied while the alarm is on
    #[arg(
        long,
        value_name = "DNU",
        default_value_t = 0.0,
        allow_negative_numbers = true,
        requires = "simulate"
    )]
    pub d_nu: f64,
    /// Volatility adjustment applied while the alarm is on
    #[arg(
        long,
        value_name = "DSIG",
        default_value_t = 0.0,
        allow_negative_numbers = true,
        requires = "simulate"
    )]
    pub d_sigma: f64,
    /// Suppress the adjustment whenever it would push the drift below r
    #[arg(long, requires = "simulate")]
    pub drift_gap_floor: bool,
    /// Evaluate this single threshold instead of scanning the R* grid
    #[arg(long, value_name = "RATIO", requires = "simulate")]
    pub rstar: Option<f64>,
    /// Monte Carlo paths
    #[arg(long, value_name = "N", default_value_t = 8000, requires = "simulate")]
    pub n_paths: usize,
    /// Simulation step in years
    #[arg(long, value_name = "DT", default_value_t = 1.0 / 252.0, requires = "simulate")]
    pub dt: f64,
    /// RNG seed (one counter-based stream per path)
    #[arg(long, value_name = "SEED", default_value_t = 5150, requires = "simulate")]
    pub seed: u64,
    /// Output path (JSON, or CSV for --gamma-sweep; default: stdout)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct WaccArgs {
    /// WACC inputs CSV with one data row (see README for columns)
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = [
            "equity_value", "debt_value", "prior_debt_value", "interest_paid",
            "index_return", "risk_free", "beta", "tax_rate",
        ]
    )]
    pub inputs: Option<PathBuf>,
    /// Market value of equity
    #[arg(long, value_name = "V", required_unless_present = "inputs")]
    pub equity_value: Option<f64>,
    /// Current debt value
    #[arg(long, value_name = "V", required_unless_present = "inputs")]
    pub debt_value: Option<f64>,
    /// Debt value one period earlier (for the average-debt denominator)
    #[arg(long, value_name = "V", required_unless_present = "inputs")]
    pub prior_debt_value: Option<f64>,
    /// Interest paid over the period
    #[arg(long, value_name = "V", required_unless_present = "inputs")]
    pub interest_paid: Option<f64>,
    /// Annualized market index return
    #[arg(
        long,
        value_name = "RATE",
        required_unless_present = "inputs",
        allow_negative_numbers = true
    )]
    pub index_return: Option<f64>,
    /// Annualized risk-free rate
    #[arg(
        long,
        value_name = "RATE",
        required_unless_present = "inputs",
        allow_negative_numbers = true
    )]
    pub risk_free: Option<f64>,
    /// Market beta of the equity
    #[arg(
        long,
        value_name = "B",
        required_unless_present = "inputs",
        allow_negative_numbers = true
    )]
    pub beta: Option<f64>,
    /// Corporate tax rate for the debt shield (default 0.35)
    #[arg(long, value_name = "RATE")]
    pub tax_rate: Option<f64>,
    /// Also write the breakdown as JSON
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Calibrate(args) => commands::calibrate(args),
        Cmd::Analyze(args) => commands::analyze(args),
        Cmd::Density(args) => commands::density(args),
        Cmd::Optimize(args) => commands::optimize(args),
        Cmd::Wacc(args) => commands::wacc_cmd(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
