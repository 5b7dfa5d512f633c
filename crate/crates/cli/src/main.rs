use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cqpointer_cli::{compare, mixture_equiv, sample, simulate, CliError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "cqpointer", version, about = "Hybrid classical-quantum pointer measurement simulator")]
struct Cli {
    /// Scenario config (JSON). The shipped default is used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the absolute L1 threshold of `compare`.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the config schedule: interact, drift, measure, update.
    Simulate,
    /// Full coupled integration against the rigid shift solution.
    Compare,
    /// Phase-space representation equivalence check.
    MixtureEquiv,
    /// Monte Carlo pointer samples with a KS test.
    Sample {
        /// Sample count (overrides the config).
        #[arg(long)]
        n: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<cqpointer_cli::Outcome, CliError> {
    let mut cfg = ScenarioConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(th) = cli.threshold {
        cfg.gate.threshold = th;
    }
    match cli.command {
        Command::Simulate => simulate(&cfg, &cli.out, cli.svg),
        Command::Compare => compare(&cfg, &cli.out, cli.svg),
        Command::MixtureEquiv => mixture_equiv(&cfg, &cli.out),
        Command::Sample { n } => sample(&cfg, &cli.out, n, cli.svg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if outcome.code != 0 {
                eprintln!("gate failed: {}", outcome.summary);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
