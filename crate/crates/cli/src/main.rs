//! `capset`: verification suites, set analysis, rank-descent traces and the
//! density bound table.
//!
//! Exit codes: 0 success, 1 identity or certificate failure, 2 usage or input
//! error, 3 input set not progression-free.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use capset_core::SliceRule;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "capset",
    version,
    about = "Exact density-increment checks for progression-free sets in F_q^r"
)]
pub struct Cli {
    /// Worker threads for verification trials. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Record wall time in JSON reports (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EquationArg {
    /// x - 2y + z = 0
    Ap,
    /// x + y + z = 0
    Sum3,
    /// x - y = 0
    Eq2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    Constructive,
    GlobalBest,
}

impl From<RuleArg> for SliceRule {
    fn from(value: RuleArg) -> Self {
        match value {
            RuleArg::Constructive => SliceRule::Constructive,
            RuleArg::GlobalBest => SliceRule::GlobalBest,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SearchArg {
    Random,
    Greedy,
    Exhaustive,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check the hyperplane identity, its norm analogue and the mean-subtraction
    /// identity on seeded random functions.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "ap")]
        equation: EquationArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "CAPSET_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the density increment for a set read from a file.
    Analyze {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum, default_value = "constructive")]
        rule: RuleArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descend rank by rank, recording each certificate.
    Iterate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, conflicts_with = "search", required_unless_present = "search")]
        set: Option<PathBuf>,
        #[arg(long, value_enum)]
        search: Option<SearchArg>,
        #[arg(long, env = "CAPSET_SEED", default_value_t = 0)]
        seed: u64,
        /// Node budget for exhaustive search.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value = "constructive")]
        rule: RuleArg,
        /// JSON report path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV trace path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tabulate the density bound recurrence T(0..r_max) as exact rationals.
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long = "r-max")]
        r_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a progression-free set in the set-file format.
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "random")]
        mode: SearchArg,
        #[arg(long, env = "CAPSET_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("capset: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
