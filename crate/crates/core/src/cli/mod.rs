//! Command-line front end: configuration, command dispatch and CSV output.

pub mod commands;
pub mod config;
pub mod csv;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::Error;

pub use commands::{run_command, Table};
pub use config::{parse_config, ConfigBuilder, RunConfig};
pub use csv::{write_csv, write_csv_to};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Coupling,
    Spectrum,
    Dos,
    Magnetization,
    Curie,
    Oracle,
    Selftest,
}

#[derive(Debug, Parser)]
#[command(name = "magphon", version, about = "Magnon-phonon coupling, renormalized magnon spectra and Curie temperature")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Key-value configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override a configuration key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output CSV path; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    pub dump_config: bool,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::InvalidParameter { .. } | Error::GridMismatch(_) => EXIT_USAGE,
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_NUMERICAL,
    }
}

pub fn load_config(cli: &Cli) -> crate::Result<RunConfig> {
    let mut builder = ConfigBuilder::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        builder.apply_text(&text)?;
    }
    for assignment in &cli.set {
        builder.apply_override(assignment)?;
    }
    builder.finish()
}

fn execute(cli: &Cli) -> crate::Result<i32> {
    let cfg = load_config(cli)?;
    if cli.dump_config {
        print!("{}", cfg.to_config_text());
        return Ok(EXIT_OK);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter {
            name: "workers",
            reason: e.to_string(),
        })?;
    let table = pool.install(|| run_command(cli.command, &cfg))?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    match out {
        Some(path) => write_csv(&table.rows, &table.header, &path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv_to(&mut lock, &table.header, &table.rows).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
    }
    if let Some(summary) = &table.summary {
        eprintln!("{summary}");
    }
    Ok(if table.failed { EXIT_NUMERICAL } else { EXIT_OK })
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "magphon: {err}");
            exit_code(&err)
        }
    }
}
