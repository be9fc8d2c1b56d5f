use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use complexity_core::{capacity_curve, learning_curve, WeightMatrix};
use complexity_lab::config::{
    parse_beta_grid, parse_weight_range, ConfigError, HopfieldCapacityConfig, HopfieldLearnConfig,
    MeasureConfig, SweepConfig,
};
use complexity_lab::experiments::{measure_weights, sweep_beta};
use complexity_lab::{output, validate_csv_text};

const THREADS_ENV: &str = "COMPLEXITY_LAB_THREADS";

#[derive(Parser)]
#[command(
    name = "complexity-lab",
    version,
    about = "Exact complexity measures of binary-node stochastic dynamics",
    after_help = "Exit codes: 0 success, 1 configuration error, 2 per-row computation errors.\n\
                  COMPLEXITY_LAB_THREADS caps the worker pool; output bytes do not depend on it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep random-weight systems across a beta grid, recording all five
    /// measures per (trial, beta)
    SweepBeta(SweepArgs),
    /// Measure one weight-matrix CSV file at a single beta
    Measure(MeasureArgs),
    /// Stochastic Hopfield incremental-learning curve (IF per stored pattern)
    HopfieldLearn(LearnArgs),
    /// Deterministic Hopfield complexity-capacity curve
    HopfieldCapacity(CapacityArgs),
    /// Re-check an emitted CSV against the measure bounds
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 5)]
    nodes: usize,
    /// Comma list (`0,0.5,1`) or `lo:hi:step`; default 0:4:0.1
    #[arg(long)]
    beta_grid: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Uniform weight range `low,high`
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    weights_range: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol_projection: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol_stationary: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also write trial-mean +/- stderr per beta to <out>.summary.csv
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct MeasureArgs {
    /// Weight matrix CSV (N rows x N columns, w_ji at row j column i)
    #[arg(long)]
    weights: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_projection: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol_stationary: f64,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long, default_value_t = 9)]
    nodes: usize,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 30)]
    patterns_max: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol_stationary: f64,
    /// Zero the Hebbian self-couplings (the common textbook variant)
    #[arg(long)]
    zero_diagonal: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long, default_value_t = 9)]
    nodes: usize,
    #[arg(long, default_value_t = 30)]
    patterns_max: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Frank-Wolfe duality-gap tolerance in bits
    #[arg(long, default_value_t = 1e-4)]
    gap_tol: f64,
    #[arg(long)]
    zero_diagonal: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// A CSV previously written by sweep-beta, measure, hopfield-learn or
    /// hopfield-capacity
    file: PathBuf,
}

fn configure_worker_pool() -> Result<(), ConfigError> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw
            .parse()
            .map_err(|_| ConfigError(format!("{THREADS_ENV}={raw:?} is not a thread count")))?;
        if threads == 0 {
            return Err(ConfigError(format!("{THREADS_ENV} must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| ConfigError(format!("worker pool: {e}")))?;
    }
    Ok(())
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), ConfigError> {
    std::fs::write(path, text)
        .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))
}

/// Ok(row_errors): 0 means a fully clean run.
fn run(cli: Cli) -> Result<usize, ConfigError> {
    configure_worker_pool()?;
    match cli.command {
        Command::SweepBeta(args) => {
            let mut config = SweepConfig::new(args.nodes, args.trials, args.seed);
            if let Some(grid) = &args.beta_grid {
                config.beta_grid = parse_beta_grid(grid)?;
            }
            let (low, high) = parse_weight_range(&args.weights_range)?;
            config.weights_low = low;
            config.weights_high = high;
            config.tol_projection = args.tol_projection;
            config.tol_stationary = args.tol_stationary;
            config.validate()?;
            let rows = sweep_beta(&config);
            write_out(&args.out, &output::sweep_csv(&config, &rows))?;
            if args.summary {
                let path = PathBuf::from(output::summary_path(&args.out.to_string_lossy()));
                write_out(&path, &output::sweep_summary_csv(&config, &rows))?;
            }
            let failures = rows.iter().filter(|r| r.outcome.is_err()).count();
            for row in rows.iter().filter(|r| r.outcome.is_err()).take(5) {
                eprintln!(
                    "row error: trial {} beta {}: {}",
                    row.trial,
                    row.beta,
                    row.outcome.as_ref().unwrap_err()
                );
            }
            Ok(failures)
        }
        Command::Measure(args) => {
            let config = MeasureConfig {
                beta: args.beta,
                tol_projection: args.tol_projection,
                tol_stationary: args.tol_stationary,
                ..MeasureConfig::new(args.beta)
            };
            config.validate()?;
            let text = std::fs::read_to_string(&args.weights)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", args.weights.display())))?;
            let weights =
                WeightMatrix::from_csv_str(&text).map_err(|e| ConfigError(e.to_string()))?;
            if weights.shape().num_nodes() > complexity_lab::MAX_DENSE_NODES {
                return Err(ConfigError(format!(
                    "weight matrix of {} nodes exceeds the dense-kernel limit of {}",
                    weights.shape().num_nodes(),
                    complexity_lab::MAX_DENSE_NODES
                )));
            }
            match measure_weights(&weights, &config) {
                Ok(row) => {
                    let text = output::measure_csv(
                        &config,
                        &args.weights.to_string_lossy(),
                        weights.shape().num_nodes(),
                        &row,
                    );
                    match &args.out {
                        Some(path) => write_out(path, &text)?,
                        None => print!("{text}"),
                    }
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("row error: {e}");
                    Ok(1)
                }
            }
        }
        Command::HopfieldLearn(args) => {
            let mut config = HopfieldLearnConfig::new(
                args.nodes,
                args.beta,
                args.patterns_max,
                args.trials,
                args.seed,
            );
            config.tol_stationary = args.tol_stationary;
            config.zero_diagonal = args.zero_diagonal;
            config.validate()?;
            match learning_curve(&config.curve_config()?) {
                Ok(points) => {
                    write_out(&args.out, &output::learn_csv(&config, &points))?;
                    let path = PathBuf::from(output::summary_path(&args.out.to_string_lossy()));
                    write_out(&path, &output::learn_summary_csv(&config, &points))?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("row error: {e}");
                    Ok(1)
                }
            }
        }
        Command::HopfieldCapacity(args) => {
            let mut config = HopfieldCapacityConfig::new(
                args.nodes,
                args.patterns_max,
                args.trials,
                args.seed,
            );
            config.gap_tol = args.gap_tol;
            config.zero_diagonal = args.zero_diagonal;
            config.validate()?;
            match capacity_curve(&config.curve_config()?) {
                Ok(points) => {
                    write_out(&args.out, &output::capacity_csv(&config, &points))?;
                    let path = PathBuf::from(output::summary_path(&args.out.to_string_lossy()));
                    write_out(&path, &output::capacity_summary_csv(&config, &points))?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("row error: {e}");
                    Ok(1)
                }
            }
        }
        Command::Validate(args) => {
            let text = std::fs::read_to_string(&args.file)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", args.file.display())))?;
            let report = validate_csv_text(&text)?;
            println!(
                "{}: {} rows checked, {} NA rows skipped, {} violations",
                args.file.display(),
                report.rows_checked,
                report.skipped_na_rows,
                report.violations.len()
            );
            for v in &report.violations {
                println!("  {v}");
            }
            Ok(report.violations.len())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
