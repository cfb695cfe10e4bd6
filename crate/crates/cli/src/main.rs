//! Command-line surface for the designs library.
//!
//! Exit codes: 0 = success / verification passed, 1 = verification failed
//! (the report carries a witness), 2 = usage or input error.

mod commands;
mod formats;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{analyze, bounds, construct, convert, search, verify};

#[derive(Parser)]
#[command(
    name = "qudit-designs",
    version,
    about = "Construct, convert and verify classical and quantum combinatorial designs"
)]
struct Cli {
    /// Pretty-print reports instead of emitting compact JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a catalog construction.
    Construct(construct::ConstructArgs),
    /// Convert between design representations.
    #[command(subcommand)]
    Convert(convert::ConvertCmd),
    /// Verify a design against its defining conditions.
    #[command(subcommand)]
    Verify(verify::VerifyCmd),
    /// Inspect states, arrays and matrices.
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCmd),
    /// Column-count bounds for orthogonal Latin arrangements.
    Bounds(bounds::BoundsArgs),
    /// Numerical search for multiunitary matrices.
    #[command(subcommand)]
    Search(search::SearchCmd),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(args) => construct::run(args, cli.pretty),
        Command::Convert(cmd) => convert::run(cmd, cli.pretty),
        Command::Verify(cmd) => verify::run(cmd, cli.pretty),
        Command::Analyze(cmd) => analyze::run(cmd, cli.pretty),
        Command::Bounds(args) => bounds::run(args, cli.pretty),
        Command::Search(cmd) => search::run(cmd, cli.pretty),
    };
    match outcome {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
