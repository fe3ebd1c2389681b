use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pseudomix::cli::{cmd_decompose, cmd_random, cmd_validate, cmd_verify, DecomposeArgs};

#[derive(Parser)]
#[command(
    name = "pseudomix",
    version,
    about = "Decompose bipartite density matrices into pseudomixtures of product projectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a state file and write a JSON report.
    Decompose {
        /// Input state JSON.
        #[arg(long)]
        input: PathBuf,
        /// Output report JSON.
        #[arg(long)]
        out: PathBuf,
        /// Residual Frobenius norm to stop at.
        #[arg(long, default_value_t = 1e-8)]
        tol_residual: f64,
        /// Extraction step budget.
        #[arg(long, default_value_t = 2000)]
        max_steps: usize,
        /// Search restarts per step.
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Base seed for the search restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Merge near-identical product terms in the report.
        #[arg(long)]
        coalesce: bool,
    },
    /// Check a state file against the density-matrix axioms and print its
    /// PPT verdict.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sample a random density matrix and write it as a state file.
    Random {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        /// Rank of the sampled state, between 1 and d1*d2.
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-derive a report's claims from the original state file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Decompose {
            input,
            out,
            tol_residual,
            max_steps,
            restarts,
            seed,
            coalesce,
        } => cmd_decompose(&DecomposeArgs {
            input,
            out,
            tol_residual,
            max_steps,
            restarts,
            seed,
            coalesce,
        }),
        Command::Validate { input } => cmd_validate(&input),
        Command::Random {
            d1,
            d2,
            rank,
            seed,
            out,
        } => cmd_random(d1, d2, rank, seed, &out),
        Command::Verify { input, report } => cmd_verify(&input, &report),
    };
    ExitCode::from(code as u8)
}
