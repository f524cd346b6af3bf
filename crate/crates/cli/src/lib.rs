//! Command-line front end for `chaoslab-core`.
//!
//! Subcommands: `classify`, `sweep`, `certify`, `orbit`, `verify`. Every
//! command writes to caller-supplied sinks so the whole CLI can be driven
//! in-process by tests; `main` only wires it to the process streams.

pub mod args;
pub mod certify;
pub mod classify;
pub mod format;
pub mod orbit_cmd;
pub mod sweep;
pub mod verify;

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use chaoslab_core::NumericSettings;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const OUTSIDE_WINDOW: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const CANT_CREATE: i32 = 73;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("outside the unimodal window: {0}")]
    OutsideWindow(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::OutsideWindow(_) => exit::OUTSIDE_WINDOW,
            CliError::Output(_) => exit::CANT_CREATE,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<chaoslab_core::ChaosError> for CliError {
    fn from(e: chaoslab_core::ChaosError) -> Self {
        use chaoslab_core::ChaosError as E;
        match e {
            E::OutsideWindow { .. } => {
                CliError::OutsideWindow(e.window_message().unwrap_or_default())
            }
            E::InvalidParameter { .. } | E::NonPositivePrice(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "chaoslab",
    version,
    about = "Chaos classification for the tatonnement price map"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a single (α, β, λ) point with both methods.
    Classify(classify::ClassifyArgs),
    /// Sweep a grid of parameters and write one row per cell.
    Sweep(sweep::SweepArgs),
    /// Search for odd cycles, turbulence witnesses and period-3 orbits.
    Certify(certify::CertifyArgs),
    /// Emit a trajectory as CSV.
    Orbit(orbit_cmd::OrbitArgs),
    /// Run the cross-validation and consistency suite.
    Verify(verify::VerifyArgs),
}

/// Tolerances, grid sizes and parallelism shared by the subcommands.
#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// Absolute tolerance for threshold comparisons.
    #[arg(long, default_value_t = 1e-12)]
    pub eps_cmp: f64,
    /// Root residual bound.
    #[arg(long, default_value_t = 1e-10)]
    pub eps_root: f64,
    /// Grid points per unit period for orbit scans.
    #[arg(long, default_value_t = 8192)]
    pub grid_density: usize,
    /// Worker threads.
    #[arg(long, env = "CHAOSLAB_JOBS")]
    pub jobs: Option<usize>,
}

impl CommonOpts {
    pub fn settings(&self) -> CliResult<NumericSettings> {
        if !(self.eps_cmp >= 0.0 && self.eps_cmp.is_finite()) {
            return Err(CliError::Usage(
                "--eps-cmp must be a non-negative number".into(),
            ));
        }
        if !(self.eps_root > 0.0 && self.eps_root.is_finite()) {
            return Err(CliError::Usage("--eps-root must be positive".into()));
        }
        if self.grid_density < 16 {
            return Err(CliError::Usage("--grid-density must be at least 16".into()));
        }
        Ok(NumericSettings {
            eps_cmp: self.eps_cmp,
            eps_root: self.eps_root,
            scan_density: self.grid_density,
            ..NumericSettings::default()
        })
    }

    pub fn pool(&self) -> CliResult<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            if n == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Internal(e.to_string()))
    }
}

/// Parses `argv` and runs the selected command. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    exit::OK
                }
                _ => exit::USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::Classify(a) => classify::run(&a, out),
        Command::Sweep(a) => sweep::run(&a, out),
        Command::Certify(a) => certify::run(&a, out),
        Command::Orbit(a) => orbit_cmd::run(&a, out),
        Command::Verify(a) => verify::run(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "chaoslab: {e}");
            e.exit_code()
        }
    }
}

/// Opens `path` for writing, or `None` for stdout.
pub(crate) fn open_output(path: Option<&std::path::Path>) -> CliResult<Option<std::fs::File>> {
    match path {
        None => Ok(None),
        Some(p) => std::fs::File::create(p)
            .map(Some)
            .map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
    }
}

/// Writes `body` to `path` if given, else to `out`.
pub(crate) fn emit(
    path: Option<&std::path::Path>,
    out: &mut dyn Write,
    body: &str,
) -> CliResult<()> {
    match open_output(path)? {
        Some(mut f) => f
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
        None => out.write_all(body.as_bytes()).map_err(CliError::from),
    }
}
