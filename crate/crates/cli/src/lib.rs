//! Command-line front end: argument parsing, command dispatch and CSV
//! reports.
//!
//! `parse_args` turns an argument list (without the program name) into a
//! validated [`RunConfig`]; [`run`] executes it and returns a [`Report`]
//! whose exit status is 0 when every checked property holds, 1 when one
//! fails and 2 on any input or module error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
mod table;

pub use commands::{run, CliError};
pub use table::{write_atomic, Cell, Table};

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "equichord",
    version,
    about = "Equichordal pairs, floating bodies and tangent-chord billiards"
)]
struct Cli {
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Sample the i-equichordal value over lines tangent to the inner body.
    Check(CheckArgs),
    /// Convex floating body and its supporting-plane (Dupin) check.
    Float(FloatArgs),
    /// Floating-equilibrium residuals over a direction grid.
    Equilibrium(EquilibriumArgs),
    /// Tangent-chord billiard orbit around the inner body.
    Billiard(BilliardArgs),
    /// Tabulate χ, its derivatives and the second-order identity residual.
    Analyze(AnalyzeArgs),
    /// Extend the circular part of a profile by the moving-chord sweep.
    Reconstruct(ReconstructArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Float(_) => "float",
            Command::Equilibrium(_) => "equilibrium",
            Command::Billiard(_) => "billiard",
            Command::Analyze(_) => "analyze",
            Command::Reconstruct(_) => "reconstruct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub outer: PathBuf,
    #[arg(long)]
    pub inner: PathBuf,
    /// Exponent i; 0 multiplies the two distances instead.
    #[arg(long, default_value_t = 4.0, value_parser = non_negative)]
    pub power: f64,
    /// Ambient dimension d of a body of revolution.
    #[arg(long, default_value_t = 3, value_parser = dimension)]
    pub dimension: usize,
    #[arg(long, default_value_t = 256, value_parser = at_least_two)]
    pub frames: usize,
    /// Directions sampled in each tangent section.
    #[arg(long, default_value_t = 128, value_parser = positive_count)]
    pub dirs: usize,
    /// Relative tolerance on the spread of the sampled values.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct FloatArgs {
    #[arg(long)]
    pub body: PathBuf,
    /// Cut-off volume as a fraction of the body volume.
    #[arg(long, value_parser = open_unit)]
    pub fraction: f64,
    #[arg(long, default_value_t = 2000, value_parser = positive_count)]
    pub dirs: usize,
    /// Largest accepted supporting-plane volume mismatch, relative to the
    /// body volume.
    #[arg(long, default_value_t = 1e-5, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct EquilibriumArgs {
    #[arg(long)]
    pub body: PathBuf,
    #[arg(long, value_parser = open_unit)]
    pub fraction: f64,
    #[arg(long, default_value_t = 500, value_parser = positive_count)]
    pub dirs: usize,
    /// Largest residual still counted as equilibrium.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BilliardArgs {
    #[arg(long)]
    pub outer: PathBuf,
    #[arg(long)]
    pub inner: PathBuf,
    /// Polar angle of the starting point about the outer basepoint.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite)]
    pub start_angle: f64,
    #[arg(long, default_value_t = 10_000, value_parser = positive_count)]
    pub steps: usize,
    /// Exponent of the tangent-segment power sums.
    #[arg(long, default_value_t = 4.0, value_parser = non_negative)]
    pub power: f64,
    /// Distance at which the orbit counts as returned to its start.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub closure_tol: f64,
    /// Relative tolerance on the spread of the power sums.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub body: PathBuf,
    /// Half-length of the tangent chords.
    #[arg(long, value_parser = positive)]
    pub sigma: f64,
    #[arg(long, default_value_t = 3, value_parser = dimension)]
    pub dimension: usize,
    /// Grid points across the support of χ.
    #[arg(long, default_value_t = 201, value_parser = at_least_two)]
    pub points: usize,
    /// Finite-difference step; defaults to 1e-3 of the shorter support half.
    #[arg(long, value_parser = positive)]
    pub step: Option<f64>,
    /// Residual bound, relative to σ⁴.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub body: PathBuf,
    #[arg(long, value_parser = positive)]
    pub sigma: f64,
    /// Interval `a,b` on which the profile is already known to be circular.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_interval)]
    pub start: (f64, f64),
    /// Largest accepted distance of a swept chord end from the boundary.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Rejected command line. `message` is the rendered diagnostic and names
/// the offending flag; help and version requests also land here with
/// `is_help` set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub message: String,
    pub is_help: bool,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message.trim_end())
    }
}

impl std::error::Error for UsageError {}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("equichord")).chain(argv.into_iter().map(Into::into));
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(RunConfig {
            command: cli.command,
            seed: cli.seed,
        }),
        Err(e) => {
            use clap::error::ErrorKind;
            let is_help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            Err(UsageError {
                message: e.render().to_string(),
                is_help,
            })
        }
    }
}

/// Parses `a,b` with `a < b`, both finite.
pub fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'a,b', got '{s}'"))?;
    let a = finite(a.trim())?;
    let b = finite(b.trim())?;
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("interval must satisfy a < b, got {a},{b}"))
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be non-negative, got {v}"))
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("must lie in (0, 1), got {v}"))
    }
}

fn count(s: &str, min: usize) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("'{s}' is not a count"))?;
    if v >= min {
        Ok(v)
    } else {
        Err(format!("must be at least {min}, got {v}"))
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    count(s, 1)
}

fn at_least_two(s: &str) -> Result<usize, String> {
    count(s, 2)
}

fn dimension(s: &str) -> Result<usize, String> {
    count(s, 3)
}

/// Builds the global thread pool from the value of `EQUICHORD_THREADS`
/// (unset or 0 = one thread per core).
pub fn configure_threads(value: Option<&str>) -> Result<usize, String> {
    let n = match value.map(str::trim) {
        None | Some("") => 0,
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| format!("EQUICHORD_THREADS must be a non-negative integer, got '{v}'"))?,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot start thread pool: {e}"))?;
    Ok(rayon::current_num_threads())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    PropertyFailure,
    InputError,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::PropertyFailure => 1,
            ExitStatus::InputError => 2,
        }
    }
}

/// Outcome of one command: a summary block for the terminal, the CSV table
/// (also written to the requested file) and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: String,
    pub table: Option<Table>,
    pub status: ExitStatus,
}
