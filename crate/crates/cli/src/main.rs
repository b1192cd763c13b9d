use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Sum of tree weights per configuration.
    Trees,
    /// Exact solve of the master equation.
    Oracle,
}

#[derive(Debug, Parser)]
#[command(name = "tasep", version, about = "Open-boundary TASEP stationary state via plane binary trees")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "TASEP_FORMAT", default_value = "text")]
    pub format: Format,

    /// Allow site counts whose tree count exceeds one million.
    #[arg(long, global = true)]
    pub force: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all trees (or marked trees) for n sites.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        marked: bool,
    },
    /// Stationary weights, or exact probabilities at given rates.
    Stationary {
        #[arg(long)]
        n: usize,
        /// Entry rate as p/q.
        #[arg(long)]
        alpha: Option<String>,
        /// Exit rate as p/q.
        #[arg(long)]
        beta: Option<String>,
        /// Print weight polynomials in a = 1/alpha, b = 1/beta.
        #[arg(long)]
        symbolic: bool,
        /// Also render probabilities with this many decimals.
        #[arg(long)]
        decimals: Option<usize>,
        #[arg(long, value_enum, default_value = "trees")]
        method: Method,
    },
    /// Run invariant suites; exits 1 if any identity fails.
    Verify {
        #[arg(long)]
        n: usize,
        /// Comma-separated: counts, lemma1, bijection, flux, marked-properties, oracle, tableaux, or all.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Comma-separated alpha:beta pairs, e.g. 1/2:1/3. Defaults to {1, 3/4, 1/2, 1/3, 1/10}^2.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Seeded continuous-time simulation compared with the exact distribution.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/1")]
        alpha: String,
        #[arg(long, default_value = "1/1")]
        beta: String,
        #[arg(long, default_value_t = 1_000_000)]
        events: u64,
        /// Events discarded before recording; defaults to 10% of the budget.
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Catalan tableau of one tree, or the full table for n sites.
    Tableaux {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        n: Option<usize>,
        #[arg(long)]
        tree: Option<String>,
    },
    /// Cycles of the marked-tree permutation.
    Cycles {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
