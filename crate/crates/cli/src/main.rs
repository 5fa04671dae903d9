use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracprog_cli::{run_scenario, Overrides, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "fracprog", version, about = "Run fractional-programming scenarios and write traces and summaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Scenario config file (`key = value` with `[section]` headers).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Run this single seed instead of the configured list.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Restrict to one solver variant.
    #[arg(long, value_name = "NAME")]
    variant: Option<String>,
    /// Also run the brute-force oracle where the budget allows.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Single-link energy efficiency.
    Ee(RunArgs),
    /// Maximum-margin linear classifier.
    Svm(RunArgs),
    /// Sum age-of-information rate allocation.
    Aoi(RunArgs),
    /// Two-link secrecy-rate power control.
    Secrecy(RunArgs),
    /// Weighted sum-rate power control.
    Power(RunArgs),
    /// Normalized-cut clustering.
    Ncut(RunArgs),
    /// Pilot design for channel estimation.
    Pilot(RunArgs),
    /// Multi-cell MIMO beamforming.
    Beamform(RunArgs),
    /// Uplink scheduling with power control.
    Schedule(RunArgs),
    /// Convergence rates of the matrix variants.
    Rates(RunArgs),
}

impl Command {
    fn split(self) -> (Scenario, RunArgs) {
        match self {
            Command::Ee(a) => (Scenario::Ee, a),
            Command::Svm(a) => (Scenario::Svm, a),
            Command::Aoi(a) => (Scenario::Aoi, a),
            Command::Secrecy(a) => (Scenario::Secrecy, a),
            Command::Power(a) => (Scenario::Power, a),
            Command::Ncut(a) => (Scenario::Ncut, a),
            Command::Pilot(a) => (Scenario::Pilot, a),
            Command::Beamform(a) => (Scenario::Beamform, a),
            Command::Schedule(a) => (Scenario::Schedule, a),
            Command::Rates(a) => (Scenario::Rates, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (scenario, a) = cli.command.split();
    let flags = Overrides { config: a.config, seed: a.seed, out: a.out, variant: a.variant, oracle: a.oracle };
    let result = ScenarioConfig::resolve(scenario, &flags).and_then(|cfg| run_scenario(&cfg));
    match result {
        Ok(report) => {
            print!("{}", report.table);
            println!("summary: {}", report.summary_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
