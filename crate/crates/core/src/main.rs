use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use morphorod::commands::{cmd_convergence, cmd_run, cmd_validate_energy, RefinementMode};

/// Quasi-stationary morphoelastic growth of a one-dimensional rod.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a scenario and write series.csv, snapshot CSVs and summary.json.
    Run {
        /// Scenario JSON document.
        scenario: PathBuf,
        /// Output directory (created if missing).
        #[arg(short, long, default_value = "out")]
        output: PathBuf,
    },
    /// Spatial or temporal refinement study; writes orders.csv.
    Convergence {
        scenario: PathBuf,
        #[arg(short, long, value_enum, default_value = "time")]
        mode: RefinementMode,
        #[arg(short, long, default_value = "out")]
        output: PathBuf,
    },
    /// Check the stored energy against its structural assumptions.
    ValidateEnergy {
        scenario: PathBuf,
        /// Stretch probes (comma separated).
        #[arg(long, value_delimiter = ',')]
        probes: Option<Vec<f64>>,
        /// Write the machine-readable report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { scenario, output } => cmd_run(&scenario, &output),
        Command::Convergence { scenario, mode, output } => cmd_convergence(&scenario, mode, &output),
        Command::ValidateEnergy { scenario, probes, report } => {
            cmd_validate_energy(&scenario, probes.as_deref(), report.as_deref())
        }
    };
    ExitCode::from(code as u8)
}
