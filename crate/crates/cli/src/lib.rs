//! Command-line driver: building, verifying and canonicalizing designs, and
//! the random search over 2-(96,20,4) designs.
//!
//! Every command takes `key=value` parameters after its positional
//! arguments. Exit codes: 0 on success, 1 when a verification fails, 2 on
//! usage or parse errors.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};

mod build;
mod check;
mod params;
pub mod search;

pub use params::Params;

/// Environment variable holding the default worker count for `search96`.
pub const JOBS_ENV: &str = "SYMDESIGN_JOBS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] symdesign::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "symdesign", version, about = "Imprimitive symmetric designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design: `sane`, `affine`, `symplectic` or `compose`.
    Build { kind: String, params: Vec<String> },
    /// Check a design file.
    Verify { file: String, params: Vec<String> },
    /// Sample 2-(96,20,4) designs and sort them into isomorphism classes.
    Search96 {
        params: Vec<String>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compare the four ingredient conditions with the flag orbit:
    /// `symplectic`, `sane` or `compose`.
    Flagcheck { kind: String, params: Vec<String> },
    /// Canonical form and automorphism group.
    Canon { file: String, params: Vec<String> },
    /// Dual structure.
    Dual { file: String, params: Vec<String> },
    /// Complementary structure.
    Complement { file: String, params: Vec<String> },
}

pub(crate) fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

/// Writes `text` to the `out=` file if given, else to `stdout`. Checks for
/// unknown parameters first, so `out` must be the last key read.
pub(crate) fn emit(p: &Params, text: &str, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let path = p.str("out");
    p.finish()?;
    match path {
        Some(path) => {
            std::fs::write(Path::new(path), text).map_err(|source| CliError::Io {
                path: path.to_string(),
                source,
            })?;
            Ok(true)
        }
        None => {
            stdout.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(false)
        }
    }
}

pub(crate) fn io_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<output>".into(),
        source,
    }
}

/// Runs one command line (without the program name) and returns the exit
/// code. Reports go to `out`; when a design is written to `out`, reports go
/// to `err` instead.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("symdesign".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let result = match cli.command {
        Command::Build { kind, params } => Params::parse(&params).and_then(|p| build::cmd_build(&kind, &p, out, err)),
        Command::Verify { file, params } => Params::parse(&params).and_then(|p| check::cmd_verify(&file, &p, out)),
        Command::Search96 { params, jobs } => {
            Params::parse(&params).and_then(|p| search::cmd_search96(&p, jobs, out))
        }
        Command::Flagcheck { kind, params } => {
            Params::parse(&params).and_then(|p| check::cmd_flagcheck(&kind, &p, out))
        }
        Command::Canon { file, params } => Params::parse(&params).and_then(|p| check::cmd_canon(&file, &p, out, err)),
        Command::Dual { file, params } => Params::parse(&params).and_then(|p| check::cmd_dual(&file, &p, out, false)),
        Command::Complement { file, params } => {
            Params::parse(&params).and_then(|p| check::cmd_dual(&file, &p, out, true))
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
