//! `hecke-slopes`: Newton polygons, slope bounds and verification campaigns.
//!
//! Exit status: 0 when every check passes, 1 when a property fails, 2 on bad
//! input or parameters.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "hecke-slopes", version, about = "Exact p-adic Newton polygons and slope bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon of the characteristic polynomial of a matrix file.
    Polygon(PolygonArgs),
    /// Run a seeded verification campaign.
    Verify(VerifyArgs),
    /// Sigma profile, B, T, the critical slope and depth thresholds.
    Bounds(BoundsArgs),
    /// Quotient shape of a sublattice, or of a sigma profile.
    Shape(ShapeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Divisibility,
    Congruence,
    Slopes,
    Layers,
}

/// Where a quotient shape comes from: an explicit list or a sigma profile.
#[derive(Args, Clone, Debug, Default)]
struct ShapeSource {
    /// Exponents a_1,a_2,... (sorted on input).
    #[arg(long, value_delimiter = ',')]
    shape: Option<Vec<u64>>,
    /// Tensor arity of the sigma profile.
    #[arg(long)]
    d: Option<u32>,
    /// Multiplier of the sigma profile.
    #[arg(long)]
    h: Option<u64>,
    /// Filtration depth.
    #[arg(long)]
    n: Option<u64>,
    /// Ambient rank; profiles default to n^d h + 2.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolygonArgs {
    /// JSON matrix file: {"t": .., "entries": [["1", "0"], ..]}.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    p: u64,
    #[command(flatten)]
    source: ShapeSource,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[command(flatten)]
    source: ShapeSource,
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random factors are drawn from [0, p^E); defaults to n + 2.
    #[arg(long)]
    entry_bound: Option<u64>,
    #[arg(long)]
    t_prime: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    source: ShapeSource,
    /// Slope, as num/den or an integer.
    #[arg(long)]
    alpha: Option<String>,
    /// Report the imaginary-quadratic bounds for m generators.
    #[arg(long)]
    iq: bool,
    #[arg(long)]
    m: Option<u64>,
    /// Upper limit for the depth-threshold search.
    #[arg(long, default_value_t = 1000)]
    max_n: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ShapeArgs {
    /// JSON matrix file whose columns span the sublattice.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[command(flatten)]
    source: ShapeSource,
    #[command(flatten)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Polygon(a) => commands::polygon(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Shape(a) => commands::shape(a),
    };
    match result {
        Ok(commands::Status::Pass) => ExitCode::SUCCESS,
        Ok(commands::Status::PropertyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
