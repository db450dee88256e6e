//! Command-line flags, the optional `--config` file, and the resolved
//! [`RunConfig`] every command runs from.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mginf::numerics::{DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use mginf::{Method, Tolerance};
use serde::Serialize;

use crate::error::CliError;
use crate::grid::parse_grid;

pub const DEFAULT_REPS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "mginf", version, about = "Busy-cycle renewal function of the M|G|inf queue")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate R(t) on a grid.
    Eval(CommonArgs),
    /// Monte Carlo estimate of R(t).
    Simulate(CommonArgs),
    /// Analytic R(t) against the Monte Carlo estimate, with z-scores.
    Compare(CommonArgs),
    /// Reliability-class bound on R(t), with a premise check when --dist is given.
    Bounds(BoundsArgs),
    /// Busy-cycle moments and the asymptotic intercept.
    Moments(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassFlag {
    Nbue,
    Nwue,
    Dfr,
    Imrl,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Arrival rate λ.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Service distribution, e.g. det:alpha=1 or hyperexp:p=0.5;0.5,means=0.5;1.5
    #[arg(long)]
    pub dist: Option<String>,
    /// start:stop:step or t1,t2,...
    #[arg(long)]
    pub grid: Option<String>,
    /// Absolute tolerance.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// auto, closed or quadrature.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for the simulator (defaults to all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plain-text key=value file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub class: Option<ClassFlag>,
    /// Mean service time α.
    #[arg(long, allow_negative_numbers = true)]
    pub mean: Option<f64>,
    /// Squared service coefficient of variation (dfr).
    #[arg(long, allow_negative_numbers = true)]
    pub cv2: Option<f64>,
    /// Second raw service moment (imrl).
    #[arg(long, allow_negative_numbers = true)]
    pub mu2: Option<f64>,
    /// Third raw service moment (imrl).
    #[arg(long, allow_negative_numbers = true)]
    pub mu3: Option<f64>,
}

/// Fully resolved settings, echoed into JSON output for provenance.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub lambda: Option<f64>,
    pub dist: Option<String>,
    pub grid_spec: Option<String>,
    pub grid: Option<Vec<f64>>,
    pub method: Method,
    pub tolerance: Tolerance,
    pub reps: u64,
    pub seed: u64,
    #[serde(skip)]
    pub threads: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub class: Option<ClassFlag>,
    pub mean: Option<f64>,
    pub cv2: Option<f64>,
    pub mu2: Option<f64>,
    pub mu3: Option<f64>,
}

const CONFIG_KEYS: &[&str] = &[
    "lambda", "dist", "grid", "tol", "method", "reps", "seed", "threads", "format", "out", "class",
    "mean", "cv2", "mu2", "mu3",
];

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage("--config", format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(
                "--config",
                format!("{} line {}: expected key=value", path.display(), i + 1),
            ));
        };
        let key = key.trim().trim_start_matches("--");
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::usage(
                "--config",
                format!("{} line {}: unknown key {key:?}", path.display(), i + 1),
            ));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Layered<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layered<'_> {
    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::usage(&format!("--{key}"), format!("cannot parse {raw:?} from config file"))
            }),
        }
    }

    fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => T::from_str(raw, true)
                .map(Some)
                .map_err(|e| CliError::usage(&format!("--{key}"), e)),
        }
    }
}

impl RunConfig {
    pub fn resolve(command: &'static str, args: &CommonArgs, bounds: Option<&BoundsArgs>) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let l = Layered { file: &file };

        let lambda = l.pick(args.lambda, "lambda")?;
        if let Some(v) = lambda {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::usage("--lambda", format!("must be positive and finite, got {v}")));
            }
        }
        let dist = l.pick(args.dist.clone(), "dist")?;
        let grid_spec = l.pick(args.grid.clone(), "grid")?;
        let grid = grid_spec
            .as_deref()
            .map(parse_grid)
            .transpose()
            .map_err(|e| CliError::usage("--grid", e))?;
        let method = match l.pick(args.method.clone(), "method")? {
            Some(m) => m
                .parse::<Method>()
                .map_err(|e| CliError::usage("--method", e.to_string()))?,
            None => Method::Auto,
        };
        let abs = l.pick(args.tol, "tol")?.unwrap_or(DEFAULT_ABS_TOL);
        let tolerance = Tolerance::new(abs, DEFAULT_REL_TOL).map_err(|e| CliError::usage("--tol", e.to_string()))?;
        let reps = l.pick(args.reps, "reps")?.unwrap_or(DEFAULT_REPS);
        if reps < 2 {
            return Err(CliError::usage("--reps", format!("need at least 2 replications, got {reps}")));
        }
        let seed = l.pick(args.seed, "seed")?.unwrap_or(DEFAULT_SEED);
        let threads = l.pick(args.threads, "threads")?;
        if threads == Some(0) {
            return Err(CliError::usage("--threads", "must be at least 1"));
        }
        let format = l.pick_enum(args.format, "format")?.unwrap_or(Format::Csv);
        let out = l.pick(args.out.clone(), "out")?;

        let empty = BoundsArgs::default();
        let b = bounds.unwrap_or(&empty);
        Ok(RunConfig {
            command,
            lambda,
            dist,
            grid_spec,
            grid,
            method,
            tolerance,
            reps,
            seed,
            threads,
            format,
            out,
            class: l.pick_enum(b.class, "class")?,
            mean: l.pick(b.mean, "mean")?,
            cv2: l.pick(b.cv2, "cv2")?,
            mu2: l.pick(b.mu2, "mu2")?,
            mu3: l.pick(b.mu3, "mu3")?,
        })
    }

    pub fn require_lambda(&self) -> Result<f64, CliError> {
        self.lambda
            .ok_or_else(|| CliError::usage("--lambda", "is required"))
    }
}
