//! Dataset generation and verification for the cocktail BPSK rate study.
//!
//! Every command produces a CSV: `#`-prefixed metadata lines, one header
//! row, then data rows with shortest round-trip floats and LF line endings.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv;
pub mod datasets;
pub mod verify;

use std::fs;
use std::io::Write;

pub use config::{Command, GridSpec, RunConfig, Scheme, Spacing};
pub use csv::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<cocktail_core::Error> for CliError {
    fn from(e: cocktail_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

/// Builds the dataset for `cfg` and returns the rendered CSV.
///
/// For `verify` the CSV is returned together with an error when any check
/// fails, so the table can still be written.
pub fn render(cfg: &RunConfig) -> Result<(String, Option<CliError>), CliError> {
    cfg.validate()?;
    if cfg.command == Command::Verify {
        let report = verify::run_checks(cfg)?;
        let failed: Vec<String> = report
            .failures()
            .iter()
            .map(|c| format!("{} ({})", c.id, c.name))
            .collect();
        let err = (!failed.is_empty())
            .then(|| CliError::Verification(format!("criteria {}", failed.join(", "))));
        return Ok((report.table.render(), err));
    }
    Ok((datasets::build(cfg)?.render(), None))
}

/// Runs `cfg`, writing the CSV to `cfg.out` or to standard output.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let (text, failure) = render(cfg)?;
    match &cfg.out {
        Some(path) => fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let core = cocktail_core::Error::InvalidParameter("bad".into());
        assert_eq!(CliError::from(core).exit_code(), 2);
        assert_eq!(CliError::Verification("x".into()).exit_code(), 3);
    }

    #[test]
    fn render_validates_first() {
        let mut cfg = RunConfig::new(Command::Fig3a);
        cfg.ratios = vec![];
        assert!(matches!(render(&cfg), Err(CliError::Usage(_))));
    }
}
