//! `deconflict`: command-line front end for departure deconfliction.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use deconflict_core::scenario::SampleMode;
use deconflict_core::Error;

#[derive(Debug, Parser)]
#[command(name = "deconflict", version, about = "Ground-delay deconfliction of constant-velocity flights")]
struct Cli {
    /// Worker threads for parallel stages (0 = one per core). Outputs do not
    /// depend on this value.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Directory for CSV/JSON artifacts. Nothing is written without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forbidden relative-delay interval of one mission pair.
    SolvePair(SolvePairArgs),
    /// Greedy schedule for a fixed flight order.
    Schedule(ScheduleArgs),
    /// Try every flight order and keep the least total delay.
    Optimize(ScenarioArgs),
    /// Random-topology experiment followed by a distribution fit.
    Montecarlo(MonteCarloArgs),
    /// Fit candidate distributions to a sample CSV.
    Fit(FitArgs),
    /// Four-flight Atlanta case study at separation radius `--h`.
    Casestudy(CaseStudyArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario's separation radius, meters.
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Debug, Args)]
struct SolvePairArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Id of the mission departing first (default: first in the file).
    #[arg(long)]
    first: Option<String>,
    /// Id of the mission departing second (default: second in the file).
    #[arg(long)]
    second: Option<String>,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated flight order (default: file order).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Latest allowed departure, seconds (default: large enough to always succeed).
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Debug, Args)]
struct MonteCarloArgs {
    #[arg(long, default_value_t = 4)]
    agents: usize,
    #[arg(long, default_value_t = 100)]
    topologies: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `pooled` records every flight order, `optimal` only the best one.
    #[arg(long, default_value = "pooled")]
    mode: SampleMode,
    #[arg(long, default_value_t = 1.5)]
    h: f64,
    /// Side of the square airspace, meters.
    #[arg(long, default_value_t = 20.0)]
    side: f64,
    #[arg(long, default_value_t = 0.66)]
    speed_min: f64,
    #[arg(long, default_value_t = 1.89)]
    speed_max: f64,
    #[arg(long, default_value_t = deconflict_core::statfit::DEFAULT_BINS)]
    bins: usize,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Sample CSV with an `average_delay_s` column.
    #[arg(long)]
    samples: PathBuf,
    #[arg(long, default_value_t = deconflict_core::statfit::DEFAULT_BINS)]
    bins: usize,
}

#[derive(Debug, Args)]
struct CaseStudyArgs {
    /// Separation radius, meters.
    #[arg(long)]
    h: f64,
    /// Geodetic scenario to use instead of the bundled fixture.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_infeasible() => 3,
        Some(Error::NonConvergence(_) | Error::DegenerateRelativeVelocity) => 4,
        Some(_) => 2,
        None => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(4);
        }
    };
    match pool.install(|| commands::run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
