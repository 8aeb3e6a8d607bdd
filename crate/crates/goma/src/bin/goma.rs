//! Command-line front end: pick a study, point it at a config file and an
//! output directory, run it.

use clap::{Parser, Subcommand};
use goma::experiments::{self, Experiment, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "goma",
    version,
    about = "Goal-oriented multiple access laboratory: threshold strategies on a collision channel",
    after_help = "Config files hold one key = value pair per line; flags override file values.\n\
                  Without --out, tables print to stdout."
)]
struct Cli {
    /// Flat key=value experiment configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Master seed; every random stream in a study derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for output tables (default: print to stdout).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Transmission cost override; default runs each study's stock panels.
    #[arg(long, global = true)]
    psi: Option<f64>,

    /// Node-count override.
    #[arg(long, global = true)]
    nodes: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Binary warm-up: polled dominant node vs optimal push strategies.
    Toy,
    /// Map which equilibrium each three-node starting profile converges to.
    Basins,
    /// Sweep fleet size in the symmetric scenario: reward and energy vs baseline.
    Symmetric,
    /// Per-episode equilibrium vs best-dominant comparison on random fleets.
    Asymmetric,
    /// Train threshold learners over the live channel and score the result.
    Beta,
    /// Equilibria negotiated from perturbed beliefs, evaluated on the truth.
    Robustness,
    /// Run the oracle certification suite.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match assemble(&cli).and_then(|cfg| experiments::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn assemble(cli: &Cli) -> goma::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(psi) = cli.psi {
        cfg.psi = Some(psi);
    }
    if let Some(nodes) = cli.nodes {
        cfg.nodes = Some(nodes);
    }
    cfg.experiment = Some(match cli.command {
        Command::Toy => Experiment::Toy,
        Command::Basins => Experiment::Basins,
        Command::Symmetric => Experiment::Symmetric,
        Command::Asymmetric => Experiment::Asymmetric,
        Command::Beta => Experiment::Beta,
        Command::Robustness => Experiment::Robustness,
        Command::Verify => Experiment::Verify,
    });
    Ok(cfg)
}
