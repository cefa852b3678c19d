//! The `qf` command-line driver: configuration, dispatch and output records.

pub mod commands;
pub mod config;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{Command, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or input strings; exit code 2.
    Config(String),
    /// The computation itself failed; exit code 1.
    Domain(quadforge::Error),
    Internal(String),
}

impl From<quadforge::Error> for CliError {
    fn from(e: quadforge::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) | CliError::Internal(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Config(m) => ("ConfigError".to_string(), m.clone()),
            CliError::Domain(e) => (e.kind().to_string(), e.to_string()),
            CliError::Internal(m) => ("InternalError".to_string(), m.clone()),
        };
        json!({ "error": { "kind": kind, "message": message, "exit_code": self.exit_code() } })
    }
}

#[derive(Debug, Parser)]
#[command(name = "qf", version, about = "Rational points from monochromatic lines, and finite-field checks")]
pub struct Cli {
    pub command: Command,
    /// TOML or JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the record here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Split curve as "e1,e2,e3".
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// Base point as "x,y".
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Forge restarts.
    #[arg(long)]
    pub restarts: Option<u64>,
    /// Certification bound B.
    #[arg(long)]
    pub bound: Option<i64>,
}

/// The single JSON document written by every command except `density`.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
    pub wall_time_ms: u128,
    pub payload: Value,
}

/// Merges flags over the config file.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != cli.command {
            return Err(CliError::Config(format!(
                "config is for `{}` but `{}` was requested",
                c.name(),
                cli.command.name()
            )));
        }
    }
    cfg.command = Some(cli.command);
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(c) = &cli.curve {
        cfg.curve = c.clone();
    }
    if let Some(p) = &cli.point {
        cfg.point = p.clone();
    }
    if let Some(r) = cli.restarts {
        cfg.forge.restarts = r;
    }
    if let Some(b) = cli.bound {
        cfg.certify.bound = b;
        cfg.growth.bound = b;
    }
    if cfg.command == Some(Command::Density) {
        cfg.density.seed = cfg.seed;
    }
    // Parse the curve up front so malformed input is a config error.
    cfg.curve()?;
    cfg.point()?;
    Ok(cfg)
}

/// Runs the command and returns the text to write.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    let command = cfg.command.ok_or_else(|| CliError::Config("no command".into()))?;
    let start = Instant::now();
    if command == Command::Density {
        let (lines, aggregate) = commands::density_lines(cfg)?;
        let mut out = String::new();
        let header = json!({ "record": "header", "tool": "quadforge", "version": VERSION, "config": cfg });
        out.push_str(&header.to_string());
        out.push('\n');
        for l in lines {
            out.push_str(&l.to_string());
            out.push('\n');
        }
        let summary =
            json!({ "record": "summary", "aggregate": aggregate, "wall_time_ms": start.elapsed().as_millis() });
        out.push_str(&summary.to_string());
        out.push('\n');
        return Ok(out);
    }
    let payload = commands::run_command(command, cfg)?;
    let record = RunRecord {
        tool: "quadforge",
        version: VERSION,
        command: command.name(),
        config: cfg.clone(),
        wall_time_ms: start.elapsed().as_millis(),
        payload,
    };
    serde_json::to_string_pretty(&record).map(|s| s + "\n").map_err(|e| CliError::Internal(e.to_string()))
}

/// Full run from parsed flags; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = resolve(cli).and_then(|cfg| {
        if let Some(n) = cfg.threads {
            // Only the first call in a process can set the global pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        let text = execute(&cfg)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Internal(e.to_string())),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            log::debug!("{e:?}");
            println!("{}", e.to_json());
            e.exit_code()
        }
    }
}
