//! `psep`: lattice enumeration, measure evaluation, convex-roof runs,
//! classification, and self tests.
//!
//! Exit codes: 0 = command ran (analytical failures such as broken chains
//! are reported in the payload, not the exit code), 1 = usage error,
//! 2 = input validation error, 3 = capability cap exceeded.

mod commands;
mod config;
mod source;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use psep::Error;

#[derive(Parser)]
#[command(name = "psep", version, about = "Partial separability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file; flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// RNG seed for optimizer restarts and random states
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Logarithm base: e (nats) or 2 (bits)
    #[arg(long = "log-base", global = true)]
    log_base: Option<String>,

    /// Entropy base of the measure: vn | tsallis:q | renyi:q
    #[arg(long = "spec-base", global = true)]
    spec_base: Option<String>,

    /// Level-I combiner: halfsum | sum | qsum:q | qmean:q | nonmonotone-product
    #[arg(long = "combiner-i", global = true)]
    combiner_i: Option<String>,

    /// Level-II combiner: min | qmean:q | qsum:q | magicg
    #[arg(long = "combiner-ii", global = true)]
    combiner_ii: Option<String>,

    /// Optimizer restarts
    #[arg(long, global = true)]
    restarts: Option<usize>,

    /// Decomposition ensemble size (defaults to rank squared)
    #[arg(long, global = true)]
    m: Option<usize>,

    /// Optimizer convergence tolerance on the objective decrease
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a label lattice and render it as text, JSON, or DOT
    Lattice {
        #[arg(long)]
        n: usize,
        /// I = partitions, II = down-set labels, III = class labels
        #[arg(long)]
        level: String,
        /// full | ksep | kprod
        #[arg(long, default_value = "full")]
        sublattice: String,
    },
    /// Evaluate pure-state measures per lattice label with chain verdicts
    Measure {
        #[arg(long)]
        state: String,
        /// A partition ("1|23") or down-set label ("↓{1|23,2|13}");
        /// omitted = whole-lattice report
        #[arg(long)]
        label: Option<String>,
        /// Whole-lattice report level: I (default) or II
        #[arg(long, default_value = "I")]
        level: String,
    },
    /// Convex-roof run for the ᾱ-entanglement of formation
    Roof {
        #[arg(long)]
        state: String,
        /// Down-set label; defaults to the bottom label ↓{1|2|...|n}
        #[arg(long)]
        label: Option<String>,
    },
    /// Classify a state into partial separability classes
    Classify {
        #[arg(long)]
        state: String,
        /// Certification threshold on the roof objective
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Run the built-in invariant suites and print a pass/fail matrix
    Selftest {
        /// lattice | means | measures | roof | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Capability(_) => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}
