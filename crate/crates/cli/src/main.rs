//! `evgame`: batch front end for the charging-game solvers.
//!
//! Exit status: 0 success, 1 I/O failure, 2 malformed input (schema), 3
//! violated precondition or hypothesis, 4 numerical conditioning failure.
//! Log verbosity is read from `EVGAME_LOG` (e.g. `EVGAME_LOG=debug`).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "evgame", version, about = "Nash vs coalition equilibria of the EV-charging game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve both regimes for a scenario file and emit a result record.
    Solve(SolveArgs),
    /// Sweep coalition sizes from a sweep spec and emit the metric table.
    Sweep(SweepArgs),
    /// Three-station comparison over all eight type assignments.
    Table(TableArgs),
    /// Evaluate the closed-form preference condition for a scenario.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Case {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    ThreeStation,
}

/// Options shared by every command.
#[derive(Debug, Args)]
struct Common {
    /// Input file (scenario file; sweep spec for `sweep`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized inputs; overrides the seed in a sweep spec.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Coalition as 1-based station indices, e.g. `1,2,3`; repeat for more.
    #[arg(long = "coalition", value_parser = parse_indices)]
    coalitions: Vec<Vec<usize>>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Coalition sizes, e.g. `1,2,3`; defaults to the spec's list.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "three-station")]
    preset: Preset,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    case: Case,
    /// `all`, `coalition`, `outside` or 1-based indices `i,j,k`; repeatable.
    #[arg(long = "group")]
    groups: Vec<String>,
}

fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            match p.parse::<usize>() {
                Ok(0) => Err("indices are 1-based".to_string()),
                Ok(v) => Ok(v),
                Err(_) => Err(format!("`{p}` is not a positive integer")),
            }
        })
        .collect()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EVGAME_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Table(a) => commands::table(&a),
        Command::Check(a) => commands::check(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
