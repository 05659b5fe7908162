//! `fcone`: command-line front end for the divisor calculus in `fcone-core`.
//!
//! Exit codes: 0 verified/feasible, 1 refuted/infeasible (or a lemma
//! mismatch), 2 undecided, 3 usage or parse error, 4 I/O error.

mod commands;
mod lemmas;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{Failure, RunReport};

#[derive(Debug, Parser)]
#[command(
    name = "fcone",
    version,
    about = "Exact divisor calculus on M̄0,m and M̄0,n(P1,1)"
)]
struct Cli {
    /// Emit a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Re-run the n = 4, 5, 6 log-Fano computations and compare with the fixtures.
    Lemmas {
        /// Expectation file (defaults to the built-in fixtures).
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Check that K_n + Σ a_s B[s] is anti-ample with 0 <= a_s <= 1.
    Verify {
        #[arg(long)]
        n: usize,
        /// Coefficients, e.g. "a2=1/4,a4=1/4,a5=1".
        #[arg(long, default_value = "")]
        combo: String,
    },
    /// Search for a boundary witness by exact feasibility of the shape constraints.
    Search {
        #[arg(long)]
        n: usize,
        /// One-sided bounds, e.g. "a4>=0,a6<=1".
        #[arg(long, default_value = "")]
        bounds: String,
        /// Add 0 <= a_s <= 1 for every s.
        #[arg(long)]
        unit_box: bool,
    },
    /// Print the anti-ampleness constraints in (a_2, …, a_n).
    Constraints {
        #[arg(long)]
        n: usize,
        /// One form per four-partition instead of per shape.
        #[arg(long)]
        full: bool,
    },
    /// F-curve values and the Fulton-positivity verdict for a divisor on M̄0,m.
    Fcurves {
        /// JSON divisor file: {"m":5,"psi":{...},"delta":{...}}.
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, value_enum, default_value_t = SenseArg::Positive)]
        sense: SenseArg,
        /// Test >= 0 (<= 0) instead of the strict inequality.
        #[arg(long)]
        non_strict: bool,
        /// List every violating F-curve.
        #[arg(long)]
        all_witnesses: bool,
    },
    /// Pull a divisor on M̄0,n(P1,1) back along α or the β_i.
    Pullback {
        #[arg(value_enum)]
        map: MapArg,
        /// JSON divisor file: {"n":5,"L":{...},"B":{...}} or {"n":5,"K":true,"a":{...}}.
        #[arg(long, conflicts_with_all = ["n", "canonical", "combo"])]
        divisor: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Include the canonical class K_n.
        #[arg(long = "canonical", short = 'K')]
        canonical: bool,
        #[arg(long)]
        combo: Option<String>,
    },
    /// TSV of the boundary correspondence Δ_S on M̄0,n+3 ↦ B_S.
    Strata {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SenseArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MapArg {
    Alpha,
    Beta,
}

fn configure_threads() {
    if let Some(k) = std::env::var("FCONE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
    {
        // Ignore the error if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

fn run(cli: &Cli) -> Result<RunReport, Failure> {
    match &cli.command {
        Command::Lemmas { expect } => lemmas::cmd_lemmas(expect.as_deref()),
        Command::Verify { n, combo } => commands::cmd_verify(*n, combo),
        Command::Search {
            n,
            bounds,
            unit_box,
        } => commands::cmd_search(*n, bounds, *unit_box),
        Command::Constraints { n, full } => commands::cmd_constraints(*n, *full),
        Command::Fcurves {
            divisor,
            sense,
            non_strict,
            all_witnesses,
        } => commands::cmd_fcurves(divisor, *sense, !*non_strict, *all_witnesses),
        Command::Pullback {
            map,
            divisor,
            n,
            canonical,
            combo,
        } => commands::cmd_pullback(*map, divisor.as_deref(), *n, *canonical, combo.as_deref()),
        Command::Strata { n } => commands::cmd_strata(*n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json_string());
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit_status)
        }
        Err(failure) => {
            eprintln!("fcone: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
