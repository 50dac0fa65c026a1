use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isowell::experiment::{self, ExperimentConfig, ExperimentError, ScenarioKind};

#[derive(Parser, Debug)]
#[command(
    name = "isowell",
    version,
    about = "Isoenergetic well compression experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress (|1>+|2>)/sqrt(2) to its minimum feasible width.
    Example1(Common),
    /// Compress (|1>+|N>)/sqrt(2) and print the spread weights.
    Spread(Common),
    /// Scan the ground-level weight epsilon over a list of N.
    EpsilonScan(Common),
    /// Tabulate Helstrom cost differences over a prior x epsilon grid.
    CostGrid(Common),
    /// Cost report for a pair with arbitrary initial overlap alpha.
    GeneralPair(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML experiment config; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative constraint tolerance for the entropy solver.
    #[arg(long)]
    tol: Option<f64>,
    /// Suppress the summary.
    #[arg(long)]
    quiet: bool,
}

fn execute(kind: ScenarioKind, args: &Common) -> Result<(), ExperimentError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(kind, path)?,
        None => ExperimentConfig::default_for(kind),
    };
    if let Some(out) = &args.out {
        config.output_path = out.clone();
    }
    if let Some(tol) = args.tol {
        config.solver.constraint_tol = tol;
    }
    let outcome = experiment::run(&config)?;
    outcome.table.write_csv(&config.output_path)?;
    if !args.quiet {
        print!("{}", outcome.summary);
        println!("csv: {}", config.output_path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Example1(a) => (ScenarioKind::Example1, a),
        Command::Spread(a) => (ScenarioKind::Spread, a),
        Command::EpsilonScan(a) => (ScenarioKind::EpsilonScan, a),
        Command::CostGrid(a) => (ScenarioKind::CostGrid, a),
        Command::GeneralPair(a) => (ScenarioKind::GeneralPair, a),
    };
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
