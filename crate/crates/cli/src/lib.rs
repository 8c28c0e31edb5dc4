//! Command-line front end: config loading, the five subcommands and the
//! exit-code contract (0 success, 2 config or input error, 3 numeric
//! failure).

pub mod commands;
pub mod config;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {detail}")]
    Config { path: String, detail: String },

    #[error("input error: {detail}")]
    Input { detail: String },

    #[error("numeric failure: {detail}")]
    Numeric { detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Input { .. } => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}

impl From<elastimesh::Error> for CliError {
    fn from(e: elastimesh::Error) -> Self {
        use elastimesh::Error as E;
        let detail = e.to_string();
        match e {
            E::Training { .. }
            | E::NonFiniteLoss { .. }
            | E::NonFiniteLayer { .. }
            | E::DegenerateCell { .. }
            | E::Domain { .. } => CliError::Numeric { detail },
            _ => CliError::Input { detail },
        }
    }
}

/// Caps the global rayon pool from `ELASTIMESH_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ELASTIMESH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config {
            path: "ELASTIMESH_THREADS".into(),
            detail: format!("expected a positive integer, got {raw:?}"),
        })?;
    // a pool that is already built (tests) keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
