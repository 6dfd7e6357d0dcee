//! Library side of the `cdut` command-line tool.
//!
//! Exit codes: 0 success (or YES), 1 file and parse errors, 2 invalid input
//! or violated preconditions, 3 a NO decision.

pub mod args;
pub mod bench;
pub mod generate;
pub mod instance;
pub mod record;
pub mod run;

use std::path::{Path, PathBuf};

pub use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}line {line}: {message}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] cdut::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_INPUT,
            CliError::Invalid(_) | CliError::Core(_) => EXIT_INVALID,
        }
    }

    pub(crate) fn with_path(self, file: &Path) -> Self {
        match self {
            CliError::Parse { line, message, .. } => CliError::Parse {
                path: Some(file.to_path_buf()),
                line,
                message,
            },
            other => other,
        }
    }
}

/// Text for stdout plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Compute(args) => run::compute(args),
        Command::Decide(args) => run::decide(args),
        Command::Gen(args) => generate::generate(args),
        Command::Bench(args) => bench::bench(args),
    }
}

/// Applies `CDUT_THREADS` (0 or unset = one worker per core).
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(raw) = value else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("CDUT_THREADS must be an integer, got `{raw}`")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Invalid(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}
