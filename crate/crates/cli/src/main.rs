//! `apw`: command-line front end for the `bohr-ap` library.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 parse or input
//! error, 3 basis or grid mismatch, 4 model violation (aliasing, lattice,
//! non-character, oversized grid).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "apw",
    version,
    about = "Almost periodic trigonometric polynomials and doubly invariant subspaces"
)]
pub struct Cli {
    /// Session configuration (JSON). Falls back to $APW_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the canonical JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Print JSON on stdout instead of a human summary.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Bohr spectrum and coefficients of a coefficient file.
    Spectrum { file: PathBuf },
    /// Multiply two trigonometric polynomials.
    Mul { f: PathBuf, g: PathBuf },
    /// Exact mean value and its finite-window approximations.
    Mean {
        file: PathBuf,
        /// Comma separated window half-widths.
        #[arg(long = "R", value_name = "LIST", value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        r: Vec<f64>,
    },
    /// Bohr transform of a sequence, or inverse transform of a polynomial.
    Transform { file: PathBuf },
    /// Compare the coefficients of f·g with the convolution of coefficients.
    LemmaCheck(LemmaArgs),
    /// Doubly invariant subspaces on the finite model.
    #[command(subcommand)]
    Wiener(WienerCommand),
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[arg(required_unless_present = "random")]
    f: Option<PathBuf>,
    #[arg(required_unless_present = "random")]
    g: Option<PathBuf>,
    /// Check this many seeded random pairs instead of reading files.
    #[arg(long, value_name = "COUNT", conflicts_with_all = ["f", "g"])]
    random: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridOverride {
    /// Grid dimension, overriding the configuration.
    #[arg(long)]
    d: Option<usize>,
    /// Points per axis, overriding the configuration.
    #[arg(long = "n", short = 'N')]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum WienerCommand {
    /// Analyze the span of a file of grid vectors.
    Analyze { file: PathBuf },
    /// Emit an orthonormal basis of 1_σ L² for σ given as multi-indices.
    Generate {
        /// JSON list of multi-indices, e.g. '[[0],[3]]'.
        #[arg(long)]
        sigma: String,
        #[command(flatten)]
        grid: GridOverride,
    },
    /// Round-trip every subset of a small grid.
    Sweep {
        #[command(flatten)]
        grid: GridOverride,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
