mod config;
mod output;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmzs::{ErrorKind, Limits};

use config::{FileConfig, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "pmzs",
    version,
    about = "Factorization invariants of plus-minus weighted zero-sum sequences"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format
    #[arg(long, global = true, env = "PMZS_FORMAT", value_enum)]
    format: Option<Format>,
    /// Directory for persisted atom sets
    #[arg(long, global = true, env = "PMZS_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for subset sweeps
    #[arg(long, global = true, env = "PMZS_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Longest atom the enumerator may look for
    #[arg(long, global = true, env = "PMZS_MAX_ATOM_LEN", value_parser = clap::value_parser!(u64).range(1..))]
    max_atom_len: Option<u64>,
    /// Largest group order that gets a complete Δ* sweep
    #[arg(long, global = true, env = "PMZS_MAX_ORDER", value_parser = clap::value_parser!(u64).range(1..))]
    max_order: Option<u64>,
    /// Largest ground set accepted by atom enumeration
    #[arg(long, global = true, env = "PMZS_MAX_GROUND", value_parser = clap::value_parser!(u64).range(1..))]
    max_ground: Option<u64>,
    /// Largest k accepted by `rho`
    #[arg(long, global = true, env = "PMZS_RHO_CAP", value_parser = clap::value_parser!(u32).range(1..))]
    rho_cap: Option<u32>,
    /// Disable the pruning rules (slower; for cross-checking)
    #[arg(long, global = true, env = "PMZS_NO_PRUNE")]
    no_prune: bool,
    /// TOML file with defaults for the settings above and `[limits]`
    #[arg(long, global = true, env = "PMZS_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants of a group such as C2xC4
    Group { group: String },
    /// Atoms of B±(G₀); G₀ defaults to the whole group
    Atoms { group: String, subset: Option<String> },
    /// Minimal distance of B±(G₀)
    MinDelta { group: String, subset: Option<String> },
    /// Factorizations and set of lengths of a sequence
    Lengths {
        group: String,
        element: String,
        /// Ground set for the atoms (default: the support of the element)
        #[arg(long)]
        subset: Option<String>,
    },
    /// Local elasticity ρ_k of B±(G₀)
    Rho {
        group: String,
        k: u32,
        subset: Option<String>,
    },
    /// Δ* by a sweep over subsets of G ∖ {0}
    DeltaStar {
        group: String,
        /// Extra subset to include (repeatable)
        #[arg(long = "target")]
        targets: Vec<String>,
    },
    /// D(G) and D(B±(G₀))
    Davenport { group: String, subset: Option<String> },
    /// Compare the invariants of two groups
    Compare { left: String, right: String },
    /// Run the checks on one group or on `all-small`
    Verify {
        scope: String,
        /// Also write the JSON report to this file
        #[arg(long)]
        artifact: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(pmzs::Error),
    Usage(String),
    Io(io::Error),
    /// Checks failed (`failed > 0`) or stayed inconclusive.
    Verify { failed: usize, inconclusive: usize },
}

impl From<pmzs::Error> for CliError {
    fn from(e: pmzs::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.kind() == ErrorKind::Resource => 2,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Verify { failed, .. } if *failed > 0 => 3,
            CliError::Verify { .. } => 2,
        }
    }
}

fn resolve(global: &Global) -> Result<RunConfig, CliError> {
    let file = match &global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut limits: Limits = file.limits.unwrap_or_default();
    if let Some(v) = global.max_atom_len {
        limits.max_atom_len = v;
    }
    if let Some(v) = global.max_order {
        limits.sweep_max_order = v as usize;
    }
    if let Some(v) = global.max_ground {
        limits.max_ground = v as usize;
    }
    if let Some(v) = global.rho_cap {
        limits.rho_cap = v;
    }
    if global.no_prune {
        limits.prune = false;
    }
    let cfg = RunConfig {
        format: global.format.or(file.format).unwrap_or(Format::Table),
        jobs: global
            .jobs
            .map(|j| j as usize)
            .or(file.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        cache_dir: global.cache_dir.clone().or(file.cache_dir),
        limits,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli.global)?;
    let jobs = cfg.jobs;
    let out = pmzs::with_jobs(jobs, move || output::dispatch(cli.command, &cfg))??;
    out.print()?;
    out.status()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Core(err) => eprintln!("error: {err}"),
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Io(err) => eprintln!("error: {err}"),
                CliError::Verify { failed, inconclusive } => {
                    eprintln!("verification: {failed} failed, {inconclusive} inconclusive")
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
