//! Command-line front end: `figure`, `run` and `verify`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error, 3 I/O error,
//! 4 mathematical precondition violation.

pub mod config;
pub mod csv;
pub mod figure;
pub mod run;
pub mod verify;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;
use config::{ConfigError, RunConfig};
use figure::FigureName;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_MATH: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Config { path: PathBuf, error: ConfigError },
    Io { path: PathBuf, source: std::io::Error },
    Math(Error),
    Verification { failed: usize },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => EXIT_VERIFY,
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
            CliError::Math(_) => EXIT_MATH,
        }
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Math(error)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { path, error } => write!(f, "{}: {error}", path.display()),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Math(error) => write!(f, "mathematical precondition violated: {error}"),
            CliError::Verification { failed } => write!(f, "{failed} verification check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(name = "susy-fpe", version, about = "Interpolated supersymmetric Fokker-Planck solutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the CSV data behind fig1 (radial oscillator) or fig2 (Morse).
    Figure {
        name: FigureName,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate a configuration file and write frames plus summary.csv.
    Run {
        config: PathBuf,
        /// Output directory; defaults to the config's `output` entry, then `.`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in checks and report measured errors against tolerances.
    Verify {
        /// Only run checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if err.use_stderr() { write!(stderr, "{err}") } else { write!(stdout, "{err}") };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            err.exit_code()
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout_err = |e| CliError::io(Path::new("<stdout>"), e);
    match command {
        Command::Figure { name, out: dir } => {
            for path in figure::write_figure(name, &dir)? {
                writeln!(out, "{}", path.display()).map_err(stdout_err)?;
            }
            Ok(())
        }
        Command::Run { config, out: dir } => {
            let text = std::fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
            let parsed = RunConfig::parse_with_env(&text)
                .map_err(|error| CliError::Config { path: config.clone(), error })?;
            let dir = dir.or_else(|| parsed.output.clone()).unwrap_or_else(|| PathBuf::from("."));
            let result = run::execute(&parsed, &dir)?;
            result.summary_table().write_to(out).map_err(stdout_err)?;
            Ok(())
        }
        Command::Verify { filter } => {
            let names = verify::selected(filter.as_deref());
            if names.is_empty() {
                writeln!(out, "no checks match the filter").map_err(stdout_err)?;
                return Err(CliError::Verification { failed: 0 });
            }
            let mut failed = 0;
            for name in names {
                match verify::run_check(name).expect("selected names are known") {
                    Ok(report) => {
                        failed += usize::from(!report.passed());
                        writeln!(out, "{report}").map_err(stdout_err)?;
                    }
                    Err(err) => {
                        failed += 1;
                        writeln!(out, "FAIL {name:<24} error: {err}").map_err(stdout_err)?;
                    }
                }
            }
            if failed > 0 {
                Err(CliError::Verification { failed })
            } else {
                Ok(())
            }
        }
    }
}
