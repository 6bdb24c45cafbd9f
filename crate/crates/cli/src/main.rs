//! `zonotope`: exact counts, asymptotic estimates and random samples of
//! lattice zonotopes in `[0, n]^d`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "zonotope", version, about, arg_required_else_help = true)]
pub struct Cli {
    /// Run the built-in golden checks and exit nonzero on any mismatch.
    #[arg(long)]
    self_test: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number of lattice zonotopes ending at n*1 (or inside [0,n]^d).
    Count(CountArgs),
    /// Exact counts next to the closed-form estimate, term by term.
    Compare(EstimateArgs),
    /// Exact mean and variance of the diameter or of one class multiplicity.
    Moments(MomentArgs),
    /// Closed-form estimate of ln z_d(n), with the saddle-form cross-check.
    Asympt(EstimateArgs),
    /// The oscillating zeta-zero correction and its cos/sin decomposition.
    Icrit(EstimateArgs),
    /// Boltzmann samples at the saddle parameter (or a given theta).
    Sample(SampleArgs),
    /// Vertices of one planar sample, counter-clockwise from the origin.
    Polygon(PolygonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Param {
    Diameter,
    Occurrence,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Dimension d >= 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub dim: u32,
    /// Box sizes, comma-separated; `a..b` expands to an inclusive range.
    #[arg(long, required = true, value_delimiter = ',', value_parser = output::parse_n_list)]
    pub n: Vec<output::NList>,
    /// Sum the coefficients over every endpoint in [0,n]^d.
    #[arg(long)]
    pub cumulative: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Dimension d >= 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    /// Box sizes, comma-separated (`compare` needs integers).
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<f64>,
    /// Zeros file: one imaginary part per line, `#` comments. Defaults to the first zero.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Number of zeros in the correction.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    /// Dimension d >= 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub dim: u32,
    /// Box sizes, comma-separated; `a..b` expands to an inclusive range.
    #[arg(long, required = true, value_delimiter = ',', value_parser = output::parse_n_list)]
    pub n: Vec<output::NList>,
    /// Which parameter to average.
    #[arg(long, value_enum)]
    pub param: Param,
    /// Folded generator for `--param occurrence`, e.g. `1,1`.
    #[arg(long, value_delimiter = ',')]
    pub v0: Option<Vec<u32>>,
    /// Sign pattern of the tracked class.
    #[arg(long, default_value_t = 0)]
    pub pattern: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SamplerParams {
    /// Dimension d >= 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub dim: u32,
    /// Sample at the saddle parameter of the box [0,n]^d (d >= 2).
    #[arg(long, conflicts_with = "theta", required_unless_present = "theta")]
    pub n: Option<f64>,
    /// Sample at this parameter directly.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Skip classes with e^(-theta |v|_1) below this.
    #[arg(long, default_value_t = zonotope_core::sampler::DEFAULT_CUTOFF)]
    pub cutoff: f64,
    /// Seed of the first sample; sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: SamplerParams,
    /// Number of samples.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Classes whose multiplicity is reported, as `v1,v2[:pattern]`; repeatable.
    #[arg(long)]
    pub track: Vec<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PolygonArgs {
    #[command(flatten)]
    pub params: SamplerParams,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.self_test {
        return self_test::run();
    }
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given (see --help)");
        return ExitCode::from(2);
    };
    match commands::run(command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .and_then(|j| j.io_error_kind())
                .is_some_and(|k| k == std::io::ErrorKind::BrokenPipe)
    })
}
