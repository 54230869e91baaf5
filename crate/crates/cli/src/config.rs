use std::fs;
use std::path::{Path, PathBuf};

use pmzs::Limits;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Settings read from a `--config` TOML file. Every key is optional; unknown
/// keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub limits: Option<Limits>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Effective settings for one run: built-in defaults, then the config file,
/// then environment variables and flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    pub limits: Limits,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let l = &self.limits;
        let caps = [
            ("jobs", self.jobs as u64),
            ("max_atom_len", l.max_atom_len),
            ("max_ground", l.max_ground as u64),
            ("max_nodes", l.max_nodes),
            ("sweep_max_order", l.sweep_max_order as u64),
            ("rho_cap", l.rho_cap as u64),
            ("factorization_cap", l.factorization_cap as u64),
            ("memo_cap", l.memo_cap as u64),
        ];
        match caps.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(CliError::Usage(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }
}
