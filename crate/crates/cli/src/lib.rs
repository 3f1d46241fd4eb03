//! Reproducible experiment runner for `lbv-core`.
//!
//! Every command writes a CSV table to `--out` and a JSON summary next to it
//! (same path, `.json` extension). Exit codes: 0 on success, 2 on invalid
//! configuration or malformed input, 3 when a demo's expected phenomenon
//! does not show up.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use lbv_core::{LambdaSequence, PiecewiseLinearPeriodic};
use serde::Serialize;
use thiserror::Error;

mod commands;
pub mod table;

pub use table::{format_float, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Variation,
    Criterion,
    Sharpness,
    WangDemo,
    PerlmanDemo,
    HardyDemo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Variation => "variation",
            Command::Criterion => "criterion",
            Command::Sharpness => "sharpness",
            Command::WangDemo => "wang-demo",
            Command::PerlmanDemo => "perlman-demo",
            Command::HardyDemo => "hardy-demo",
        }
    }
}

/// Inclusive range of witness levels, written `a..b`, `a..=b` or `a`.
/// A range with `a > b` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
}

impl LevelRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }

    pub fn is_empty(self) -> bool {
        self.first > self.last
    }
}

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("expected a level range like 4..10, got {s:?}"))
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(Self {
                first: num(a)?,
                last: num(b.strip_prefix('=').unwrap_or(b))?,
            }),
            None => {
                let n = num(s)?;
                Ok(Self { first: n, last: n })
            }
        }
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "lbv", version, about = "Generalized variation experiments")]
pub struct ExperimentConfig {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Function JSON: {"breakpoints": [[x, y], ...]}
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Weight sequence JSON: {"family": "power", "params": {"s": 0.5}} or
    /// {"family": "explicit", "terms": [...]}
    #[arg(long)]
    pub sequence: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    /// Dyadic depth of the delta grid; sharpness defaults to levels + 3
    #[arg(long)]
    pub delta_depth: Option<u32>,
    /// Grid refinement for the modulus of p-continuity
    #[arg(long, default_value_t = 0)]
    pub refine: u32,
    #[arg(long, default_value = "4..10")]
    pub levels: LevelRange,
    #[arg(long, default_value_t = 30)]
    pub blocks: u32,
    /// Gap-family exponent for wang-demo
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn summary_path(&self) -> PathBuf {
        self.out.with_extension("json")
    }

    pub(crate) fn function(&self) -> Result<PiecewiseLinearPeriodic, RunError> {
        let path = self
            .function
            .as_deref()
            .ok_or_else(|| RunError::missing("function"))?;
        read_json(path, "function")
    }

    pub(crate) fn sequence(&self) -> Result<Option<LambdaSequence>, RunError> {
        self.sequence
            .as_deref()
            .map(|p| read_json(p, "sequence"))
            .transpose()
    }

    pub(crate) fn required_sequence(&self) -> Result<LambdaSequence, RunError> {
        self.sequence()?
            .ok_or_else(|| RunError::missing("sequence"))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(
    path: &Path,
    field: &'static str,
) -> Result<T, RunError> {
    let input = |message: String| RunError::Input {
        field,
        path: path.to_owned(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| input(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| input(e.to_string()))
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("cannot read `{field}` from {}: {message}", path.display())]
    Input {
        field: &'static str,
        path: PathBuf,
        message: String,
    },
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid { .. } | RunError::Input { .. } => 2,
            RunError::Io(_) => 1,
        }
    }

    pub fn field(&self) -> Option<&'static str> {
        match self {
            RunError::Invalid { field, .. } | RunError::Input { field, .. } => Some(field),
            RunError::Io(_) => None,
        }
    }

    fn missing(field: &'static str) -> Self {
        RunError::Invalid {
            field,
            message: format!("--{field} is required for this command"),
        }
    }

    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        RunError::Invalid {
            field,
            message: message.into(),
        }
    }

    /// Wraps a library error; parameter errors name their own field.
    pub(crate) fn core(field: &'static str) -> impl Fn(lbv_core::Error) -> RunError {
        move |e| {
            let field = match &e {
                lbv_core::Error::Parameter { name, .. } => name,
                _ => field,
            };
            RunError::Invalid {
                field,
                message: e.to_string(),
            }
        }
    }
}

/// What a command produced. `passed` is false when a demo's check failed.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub table: Table,
    pub summary: serde_json::Value,
    pub passed: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            3
        }
    }
}

/// Runs the command without touching the filesystem for output.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let mut outcome = match cfg.command {
        Command::Variation => commands::variation(cfg),
        Command::Criterion => commands::criterion(cfg),
        Command::Sharpness => commands::sharpness(cfg),
        Command::WangDemo => commands::wang_demo(cfg),
        Command::PerlmanDemo => commands::perlman_demo(cfg),
        Command::HardyDemo => commands::hardy_demo(cfg),
    }?;
    if let serde_json::Value::Object(map) = &mut outcome.summary {
        map.insert("command".into(), cfg.command.name().into());
        map.insert(
            "config".into(),
            serde_json::to_value(cfg).expect("config serializes"),
        );
        map.insert("passed".into(), outcome.passed.into());
    }
    Ok(outcome)
}

/// Runs the command and writes the CSV and JSON summary.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let outcome = execute(cfg)?;
    outcome.table.save(&cfg.out)?;
    let json = serde_json::to_string_pretty(&outcome.summary).map_err(std::io::Error::other)?;
    std::fs::write(cfg.summary_path(), json + "\n")?;
    Ok(outcome)
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match ExperimentConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            if !outcome.passed {
                eprintln!("{}: expected phenomenon not observed", cfg.command.name());
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
