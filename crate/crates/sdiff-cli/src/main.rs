//! `sdiff`: solve sparse-recovery problems with the s-difference penalty,
//! run the benchmark presets, sweep the toy landscape, validate the
//! proximal operators against the numerical oracle, and print exact-penalty
//! thresholds.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 solver hit its iteration
//! cap without meeting the stopping rule.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "sdiff",
    version,
    about = "s-difference sparse regularization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOut {
    /// Output directory for artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed; recorded into every artifact.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Suppress the printed summary.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance described by a JSON config.
    Solve {
        /// JSON problem description (strict schema, unknown fields rejected).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Run a named preset or a custom experiment config.
    Bench {
        /// One of the named presets (fig3_gaussian, fig3_dct, table2..table5,
        /// table6, fig5, toy).
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Custom experiment config (JSON, strict schema).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Restrict the solver roster (comma-separated names).
        #[arg(long)]
        solver: Option<String>,
        /// Full-scale trial counts and size ladders.
        #[arg(long)]
        full: bool,
        /// Record wall-clock times into artifacts (breaks byte-level
        /// reproducibility across reruns).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Penalty curves along the toy solution family.
    Toy {
        /// Grid step over t in [-2, 12] (at most 0.05).
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Sparsity level of the difference rows.
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Validate the closed-form proximal operators against the oracle.
    ProxCheck {
        /// Vector dimension (at most 8).
        #[arg(long, default_value_t = 4)]
        dims: usize,
        /// Random instances per operator.
        #[arg(long, default_value_t = 60)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Test hook: corrupt one operator to prove the check can fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[arg(long)]
        quiet: bool,
    },
    /// Exact-penalty threshold for rho.
    #[command(subcommand)]
    RhoBound(commands::rho_bound::BoundCommand),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { config, common } => {
            commands::solve::run(&config, &common.out, common.seed, common.quiet)
        }
        Command::Bench {
            preset,
            config,
            trials,
            solver,
            full,
            timing,
            common,
        } => commands::bench::run(commands::bench::BenchArgs {
            preset,
            config,
            trials,
            solver,
            full,
            timing,
            out: common.out,
            seed: common.seed,
            quiet: common.quiet,
        }),
        Command::Toy { step, s, common } => {
            commands::toy::run(step, s, &common.out, common.seed, common.quiet)
        }
        Command::ProxCheck {
            dims,
            trials,
            seed,
            inject_fault,
            quiet,
        } => commands::prox_check::run(dims, trials, seed, inject_fault, quiet),
        Command::RhoBound(cmd) => commands::rho_bound::run(cmd),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
