//! `shiftframe` — certify integer-shift generator families from JSON run
//! configurations.
//!
//! Every subcommand reads one configuration file, applies any command-line
//! overrides, and writes machine-readable artifacts (JSON reports, CSV
//! profiles) into `--out`. Nothing in the outputs depends on wall-clock time
//! or environment, so a rerun with the same configuration and seed
//! reproduces every artifact byte for byte.
//!
//! Exit codes are a stable contract for CI:
//!
//! | code | meaning                                                    |
//! |------|------------------------------------------------------------|
//! | 0    | command completed and the declared expectation (if any) held |
//! | 2    | unreadable or malformed configuration / override             |
//! | 3    | scan verdict differs from the declared expectation           |
//! | 4    | family is not a frame where the command requires one         |
//! | 5    | a cross-validation oracle exceeded its tolerance             |
//!
//! 1 is reserved for unexpected internal failures.

mod run;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shiftframe", version, about = "Rank scans, frame bounds and reconstruction checks for integer-shift generator systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the rank profile over the frequency grid and classify the family
    ScanRank(RunArgs),
    /// Per-frequency Gram eigenvalue extremes and the global frame bounds
    FrameBounds(RunArgs),
    /// Cross-validate the spline evaluation paths against independent oracles
    SplineCheck(RunArgs),
    /// Seeded synthesize/analyze/reconstruct round trips with frame ratios
    Reconstruct(RunArgs),
}

/// Flags shared by all subcommands: the configuration file, numeric
/// overrides, and the output directory.
#[derive(Args)]
pub struct RunArgs {
    /// Run-configuration JSON file
    #[arg(long = "family", value_name = "JSON")]
    pub family: PathBuf,

    /// Override the base frequency grid size
    #[arg(long = "grid-n", value_name = "N")]
    pub grid_n: Option<usize>,

    /// Override the generator profile margin
    #[arg(long, value_name = "EPS")]
    pub epsilon: Option<f64>,

    /// Override the relative tolerance for numeric rank decisions
    #[arg(long = "rel-tol", value_name = "TOL")]
    pub rel_tol: Option<f64>,

    /// Override the guard half-width around regime boundaries
    #[arg(long = "guard-band", value_name = "DELTA")]
    pub guard_band: Option<f64>,

    /// Override the RNG seed for randomized trials
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Override the number of randomized trials
    #[arg(long, value_name = "COUNT")]
    pub trials: Option<usize>,

    /// Override the norm exponent: 1, 2 or inf
    #[arg(long, value_name = "P")]
    pub p: Option<String>,

    /// Directory for the report artifacts
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::ScanRank(args) => run::scan_rank(args),
        Command::FrameBounds(args) => run::frame_bounds(args),
        Command::SplineCheck(args) => run::spline_check(args),
        Command::Reconstruct(args) => run::reconstruct(args),
    };
    ExitCode::from(code)
}
