//! Command-line front end. Configuration is resolved in layers: built-in
//! defaults, then `--preset`, then the `--config` file, then explicit flags.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{AngularConfig, EvolveConfig, GeometryKind, SweepConfig, ValidateConfig};
pub use output::{Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or parameter values; nothing was computed.
    Config(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "abc-contrast",
    version,
    about = "Detection probabilities at absorbing screens versus scattering-theory flux",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contrast between scattering theory and the ABC over a grid of β.
    ContrastSweep(SweepArgs),
    /// Angular detection densities on an inclined or L-shaped screen.
    AngularDensity(AngularArgs),
    /// Density snapshots of a 2D packet in front of the L-shaped screen.
    #[command(name = "evolve-2d")]
    Evolve2d(EvolveArgs),
    /// Cross-checks closed forms against quadrature and the PDE oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output file (a directory for evolve-2d). Defaults to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Coarser grids for a fast look.
    #[arg(long)]
    pub quick: bool,
    /// TOML file with the command's parameters; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub k0: Option<f64>,
    /// Second momentum of a two-Gaussian superposition; one curve per value.
    #[arg(long, value_delimiter = ',')]
    pub k1: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub re_beta: Option<Vec<f64>>,
    /// Explicit Im β values; replaces the log-spaced grid.
    #[arg(long, value_delimiter = ',')]
    pub im_beta: Option<Vec<f64>>,
    #[arg(long)]
    pub im_beta_min: Option<f64>,
    #[arg(long)]
    pub im_beta_max: Option<f64>,
    #[arg(long)]
    pub im_beta_points: Option<usize>,
    /// Screen distance for the finite-L contrast column.
    #[arg(long)]
    pub l: Option<f64>,
    /// Add the Laplace-method estimate column (superpositions only).
    #[arg(long, overrides_with = "no_laplace")]
    pub laplace: bool,
    #[arg(long)]
    pub no_laplace: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AngularArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryKind>,
    #[arg(long)]
    pub k0x: Option<f64>,
    #[arg(long)]
    pub k0y: Option<f64>,
    #[arg(long)]
    pub re_beta: Option<f64>,
    #[arg(long)]
    pub im_beta: Option<f64>,
    /// Screen inclinations in radians (inclined geometry).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Screen distances for the finite-L column.
    #[arg(long, value_delimiter = ',')]
    pub l: Option<Vec<f64>>,
    #[arg(long)]
    pub theta_min: Option<f64>,
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Evaluate the finite-L density on every n-th sample only.
    #[arg(long)]
    pub finite_l_stride: Option<usize>,
    #[arg(long)]
    pub no_farfield: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub k0x: Option<f64>,
    #[arg(long)]
    pub k0y: Option<f64>,
    #[arg(long)]
    pub re_beta: Option<f64>,
    #[arg(long)]
    pub im_beta: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub y_min: Option<f64>,
    #[arg(long)]
    pub boundary_samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Corrupt the reflection amplitude to confirm the suite catches it.
    #[arg(long, hide = true)]
    pub inject_rho_sign_error: bool,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("abc-contrast: {e}");
            EXIT_CONFIG
        }
    }
}
