//! `permcd` command-line interface.
//!
//! Exit codes: 0 success, 2 flag errors (from the parser), 3 verification
//! failure, 4 numerical failure.

mod commands;
mod presets;
mod svg;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "permcd", version, about = "Coordinate descent rate analysis: runners, operators, bounds, exact certification, worst-case search", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every closed-form rate at one (n, sigma) cell.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: f64,
        /// Emit the report as JSON instead of the aligned table.
        #[arg(long)]
        json: bool,
    },
    /// Run trajectory experiments (a preset or explicit flags) and write CSV.
    Run(commands::RunArgs),
    /// Restricted-operator spectral-radius curves and bound curves over sigma.
    RhoCurves(commands::RhoCurvesArgs),
    /// Certification and property suites with machine-readable reports.
    Verify(commands::VerifyArgs),
    /// Search for worst-case Hessians and check the family conjecture.
    SearchWorst(commands::SearchWorstArgs),
    /// Print operator spectral radii and bound comparisons for an instance file.
    Operator {
        /// Instance JSON file.
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate or inspect instance files.
    Instance(commands::InstanceArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bounds { n, sigma, json } => commands::bounds(n, sigma, json),
        Command::Run(args) => commands::run(&args),
        Command::RhoCurves(args) => commands::rho_curves(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::SearchWorst(args) => commands::search_worst(&args),
        Command::Operator { file, json } => commands::operator(&file, json),
        Command::Instance(args) => commands::instance(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::CmdError::VerificationFailed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
        Err(commands::CmdError::Numerical(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(4)
        }
    }
}
