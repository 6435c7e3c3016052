//! Thin command-line front end over the library: `sweep`, `verify`,
//! `formulas`, and `decompose`.
//!
//! Exit statuses: 0 success, 1 verification failure, 2 usage error.

use clap::{Args, Parser, Subcommand};
use phasecode::cli;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "phasecode", version, about = "Dephasing-detection code simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter grid and emit a CSV table plus a verification summary
    Sweep(SweepArgs),
    /// Run the full invariant suite; exits 0 iff every check passes
    Verify {
        /// Include per-check maxima and deltas
        #[arg(long)]
        verbose: bool,
    },
    /// Print the closed-form table
    Formulas(FormulaArgs),
    /// Dump the trajectory branches of a damped code state
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Config file with key = value lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// standard | symmetric:N | two_qubit
    #[arg(long)]
    code: Option<String>,
    /// phase | amplitude
    #[arg(long)]
    channel: Option<String>,
    /// Comma-separated dephasing exponents
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Comma-separated decay probabilities
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// uniform-grid:m | random:m | comma list of v or v@phase
    #[arg(long)]
    c0sq: Option<String>,
    /// Correction rounds per run
    #[arg(long)]
    k: Option<u32>,
    /// Seed for random amplitude pairs
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the grid (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct FormulaArgs {
    /// Print only the named formula
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[arg(long, default_value_t = 0.001)]
    epsilon: f64,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 0.5)]
    c0sq: f64,
}

#[derive(Args)]
struct DecomposeArgs {
    /// standard | symmetric:N | two_qubit
    #[arg(long)]
    code: String,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 0.5)]
    c0sq: f64,
    /// Relative phase of c1 in radians
    #[arg(long, default_value_t = 0.0)]
    phase: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep(args) => {
            let overrides = cli::SweepOverrides {
                code: args.code,
                channel: args.channel,
                lambda: args.lambda,
                gamma: args.gamma,
                c0sq: args.c0sq,
                k: args.k,
                seed: args.seed,
                out: args.out,
                workers: args.workers,
            };
            let cfg = match cli::build_config(args.config.as_deref(), overrides) {
                Ok(cfg) => cfg,
                Err(e) => return usage_error(&e),
            };
            let output = match cli::run_sweep(&cfg) {
                Ok(out) => out,
                Err(e) => return usage_error(&e),
            };
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &output.csv) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    print!("{}", output.summary);
                }
                None => {
                    print!("{}", output.csv);
                    eprint!("{}", output.summary);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Verify { verbose } => {
            let report = cli::verify();
            print!("{}", report.render(verbose));
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Formulas(args) => {
            match cli::formulas_table(
                args.n,
                args.lambda,
                args.epsilon,
                args.k,
                args.c0sq,
                args.name.as_deref(),
            ) {
                Ok(rows) => {
                    print!("{}", cli::render_formulas(&rows));
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(&e),
            }
        }
        Command::Decompose(args) => {
            let selector = match args.code.parse::<cli::CodeSelector>() {
                Ok(sel) => sel,
                Err(e) => return usage_error(&e),
            };
            match cli::decompose_dump(selector, args.lambda, args.c0sq, args.phase) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(&e),
            }
        }
    }
}

fn usage_error(e: &phasecode::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}
