//! `catflow`: runs evolutions, sweeps, audits and convergence studies from
//! TOML config files and writes CSV, JSON and SVG artifacts.
//!
//! Exit codes: 0 success, 2 usage or config, 3 numerical termination or
//! numerical error, 4 I/O.

pub mod commands;
pub mod config;
pub mod output;
pub mod plot;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use output::{Manifest, OutDir};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "catflow", version, about = "Numerical lab for the hyperbolic vanishing mean curvature flow near the catenoid")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub mode: Mode,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML config file; defaults apply to every missing key.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Dotted override such as `data.lambda=40`, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Worker threads for the data-parallel parts.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Mode {
    /// One radial evolution with diagnostics, snapshots and plots.
    Evolve,
    /// Axially symmetric evolution around the static neck.
    EvolveCyl,
    /// Picard iterates and their contraction ratios.
    Picard,
    /// Existence-window sweep over lambda and kappa0.
    Sweep,
    /// Re-runs the diagnostics on a trajectory written by `evolve`.
    Audit {
        #[arg(long)]
        trajectory: PathBuf,
    },
    /// Grid-refinement study.
    Converge,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Evolve => "evolve",
            Mode::EvolveCyl => "evolve-cyl",
            Mode::Picard => "picard",
            Mode::Sweep => "sweep",
            Mode::Audit { .. } => "audit",
            Mode::Converge => "converge",
        }
    }
}

/// What a command reports back for the manifest.
#[derive(Debug)]
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
}

impl Outcome {
    pub fn ok() -> Self {
        Self {
            status: "ok".into(),
            exit_code: EXIT_OK,
        }
    }

    pub fn numerical(status: impl Into<String>) -> Self {
        Self {
            status: status.into(),
            exit_code: EXIT_NUMERICAL,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::GridTooSmall(_) | Error::InvalidGrid(_) | Error::Unsupported(_) => EXIT_USAGE,
        Error::Io(_) | Error::Json(_) | Error::Checkpoint(_) => EXIT_IO,
        _ => EXIT_NUMERICAL,
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    mode: &'a str,
    exit_code: i32,
    kind: String,
    message: String,
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

/// Parses `argv` (program name first), runs the mode and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = argv.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    match cli.common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli, argv)),
            Err(e) => {
                eprintln!("error: cannot build thread pool: {e}");
                EXIT_USAGE
            }
        },
        None => execute(&cli, argv),
    }
}

fn default_out(cli: &Cli) -> PathBuf {
    match &cli.mode {
        Mode::Audit { trajectory } => trajectory.join("audit"),
        m => PathBuf::from(format!("catflow-{}", m.name())),
    }
}

fn execute(cli: &Cli, argv: Vec<String>) -> i32 {
    let start = Instant::now();
    let mode = cli.mode.name();
    let out_path = cli.common.out.clone().unwrap_or_else(|| default_out(cli));
    let mut out = match OutDir::create(&out_path) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_IO;
        }
    };
    let mut effective = serde_json::Value::Null;
    let result = commands::dispatch(cli, &mut out, &mut effective);
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            let rec = ErrorRecord {
                mode,
                exit_code: code,
                kind: error_kind(&e),
                message: e.to_string(),
            };
            let _ = out.json("error.json", &rec);
            Outcome {
                status: format!("error: {}", rec.kind),
                exit_code: code,
            }
        }
    };
    if outcome.exit_code != EXIT_OK {
        eprintln!("{mode}: {}", outcome.status);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        mode: mode.to_string(),
        argv,
        config_path: cli.common.config.as_ref().map(|p| p.display().to_string()),
        overrides: cli.common.overrides.clone(),
        config: effective,
        threads: cli.common.threads,
        status: outcome.status,
        exit_code: outcome.exit_code,
        outputs: out.written.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    match out.json("manifest.json", &manifest) {
        Ok(()) => outcome.exit_code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}
