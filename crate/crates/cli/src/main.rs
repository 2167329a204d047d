//! `replan`: run, compare and sweep obstacle-avoidance scenarios.
//!
//! Exit codes: 0 goal reached, 1 bad input, 2 stuck / out of steps / local
//! minimum, 3 collision.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "replan", version, about = "LiDAR-driven receding-horizon path planning simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory, summary and plot.
    Run(RunArgs),
    /// Run several planners on one scenario with repeated seeds.
    Compare(CompareArgs),
    /// Run parameter groups on one scenario and aggregate each.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PlotFlag {
    /// Write an SVG plot.
    #[arg(long, overrides_with = "no_plot")]
    plot: bool,
    #[arg(long = "no-plot")]
    no_plot: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Overrides the scenario's planner: proposed, conventional or apf.
    #[arg(long)]
    planner: Option<String>,
    #[command(flatten)]
    plot: PlotFlag,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated planner names.
    #[arg(long, default_value = "proposed,conventional,apf")]
    planner: String,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Nominal robot speed (m/s) used to turn path length into travel time.
    #[arg(long, default_value_t = 0.2)]
    speed: f64,
    #[command(flatten)]
    plot: PlotFlag,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Parameter groups, one `name alpha beta omega delta zeta` per line.
    #[arg(long)]
    groups: PathBuf,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::Compare(a) => commands::compare(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
