use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use omprip::rip::DEFAULT_BUDGET;
use omprip_cli::commands::{self, CommandOutput, OmpSource, EXIT_INPUT};
use omprip_cli::{Ensemble, ExperimentConfig, PolicyChoice};

/// Orthogonal Matching Pursuit and exact restricted isometry constants.
///
/// Exit codes: 0 all checks passed, 1 a verification check failed,
/// 2 input error, 3 enumeration budget exceeded.
#[derive(Parser)]
#[command(name = "omprip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JsonOut {
    /// Write the machine-readable report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact restricted isometry constant of a matrix file.
    Ric {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Run OMP and print the per-iteration trace.
    Omp {
        #[arg(long)]
        matrix: PathBuf,
        /// Signal x; OMP runs on y = A x for ||x||_0 iterations unless --k is given.
        #[arg(long, conflicts_with = "y", required_unless_present = "y")]
        signal: Option<PathBuf>,
        /// Measurement y; requires --k.
        #[arg(long)]
        y: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "lowest")]
        policy: PolicyChoice,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Build the delta_(K+1) = 1/sqrt(K) matrix and verify every claim about it.
    Counterexample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Seeded random-ensemble check of recovery under delta_(K+1) < 1/(sqrt(K)+1).
    Theorem1 {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, default_value_t = 18)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "gaussian-unit")]
        ensemble: Ensemble,
        /// Restrict to one tie-break policy (default: all three).
        #[arg(long)]
        policy: Option<PolicyChoice>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Write a seeded random matrix in the text format.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gaussian-unit")]
        ensemble: Ensemble,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, json_path) = match cli.command {
        Command::Ric { matrix, order, budget, out } => (commands::ric(&matrix, order, budget), out.json),
        Command::Omp { matrix, signal, y, k, policy, out } => {
            let source = match (signal, y) {
                (Some(s), _) => OmpSource::Signal(s),
                (None, Some(y)) => OmpSource::Measurement(y),
                (None, None) => unreachable!("clap requires one of --signal / --y"),
            };
            (commands::omp(&matrix, &source, k, policy), out.json)
        }
        Command::Counterexample { k, out } => (commands::counterexample(k as usize), out.json),
        Command::Theorem1 { seed, trials, m, n, k, ensemble, policy, budget, out } => {
            let config = ExperimentConfig {
                seed,
                trials,
                m,
                n,
                sparsity: k,
                ensemble,
                tie_policy: policy,
                budget,
            };
            (commands::theorem1(&config), out.json)
        }
        Command::Gen { m, n, seed, ensemble, out } => {
            let result = commands::gen(m, n, seed, ensemble);
            return match (result, out) {
                (Ok(o), Some(path)) => write_or_fail(&path, &o.text).unwrap_or(ExitCode::SUCCESS),
                (Ok(o), None) => {
                    print!("{}", o.text);
                    ExitCode::SUCCESS
                }
                (Err(e), _) => fail(e.exit_code, &e.message),
            };
        }
    };

    match result {
        Ok(CommandOutput { text, json, exit_code }) => {
            print!("{text}");
            if let Some(path) = json_path {
                if let Some(code) = write_or_fail(&path, &json) {
                    return code;
                }
            }
            ExitCode::from(exit_code as u8)
        }
        Err(e) => fail(e.exit_code, &e.message),
    }
}

fn write_or_fail(path: &PathBuf, contents: &str) -> Option<ExitCode> {
    std::fs::write(path, contents)
        .err()
        .map(|e| fail(EXIT_INPUT, &format!("{}: {e}", path.display())))
}

fn fail(code: i32, message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code as u8)
}
