//! The `nlcseq` command line.
//!
//! Exit codes: 0 on success (for `verify`: every exact cell meets its
//! bound), 1 when `verify` finds a cell below its bound, 2 on configuration
//! or input errors.

pub mod config;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{juxtapose, random_baseline, verify_sweep, BoundSpec, SweepOptions};
use crate::complexity::{joint_nonlinear_complexity, ComplexityOptions};
use crate::multiseq::Multisequence;
use config::{narrow, ExperimentConfig};
use format::write_multisequence;
use report::{emit, render, ReportRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nlcseq",
    version,
    about = "Multisequences with high joint nonlinear complexity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a constructed multisequence file.
    Generate(CommandArgs),
    /// Compute N_r(S_n) for every (n, r) cell.
    Complexity(CommandArgs),
    /// Check computed complexities against the lower bound of the construction.
    Verify(CommandArgs),
    /// Complexity statistics of seeded uniform random multisequences.
    Baseline(CommandArgs),
}

#[derive(Debug, Args)]
pub struct CommandArgs {
    /// key=value file with further settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub experiment: ExperimentConfig,
}

impl CommandArgs {
    fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = self.experiment;
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        Ok(cfg)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a.resolve()?),
        Command::Complexity(a) => cmd_complexity(&a.resolve()?),
        Command::Verify(a) => cmd_verify(&a.resolve()?),
        Command::Baseline(a) => cmd_baseline(&a.resolve()?),
    }
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Config(format!("worker pool: {e}"))),
    }
}

fn r_values(cfg: &ExperimentConfig, default: Vec<u32>) -> Result<Vec<u32>, CliError> {
    let r = match &cfg.r_list {
        Some(list) => narrow(&list.0, "r-list")?,
        None => default,
    };
    if r.contains(&0) {
        return Err(CliError::Config("r-list entries must be at least 1".into()));
    }
    Ok(r)
}

fn n_values(cfg: &ExperimentConfig, s: &Multisequence, default: Vec<usize>) -> Result<Vec<usize>, CliError> {
    let n = match &cfg.n_list {
        Some(list) => narrow(&list.0, "n-list")?,
        None => default,
    };
    if let Some(&bad) = n.iter().find(|&&n| n == 0 || n > s.len()) {
        return Err(CliError::Config(format!("n-list entry {bad} outside [1, {}]", s.len())));
    }
    Ok(n)
}

pub fn cmd_generate(cfg: &ExperimentConfig) -> Result<i32, CliError> {
    let s = cfg.multisequence()?;
    emit(write_multisequence(&s).as_bytes(), cfg.output.as_deref())?;
    Ok(EXIT_OK)
}

/// Every `(n, r)` cell; bound columns are filled where the construction's
/// theorem covers the cell.
pub fn cmd_complexity(cfg: &ExperimentConfig) -> Result<i32, CliError> {
    let s = cfg.multisequence()?;
    let n_list = n_values(cfg, &s, (1..=s.len()).collect())?;
    let r_list = r_values(cfg, vec![1])?;
    let opts = ComplexityOptions {
        budget: cfg.budget_from_env()?,
        witness: false,
    };
    let spec = BoundSpec::for_provenance(s.provenance()).ok();
    let cells: Vec<(usize, u32)> = n_list
        .iter()
        .flat_map(|&n| r_list.iter().map(move |&r| (n, r)))
        .collect();
    let timing = cfg.timing;

    let rows = in_pool(cfg.workers()?, || {
        cells
            .par_iter()
            .map(|&(n, r)| {
                let start = std::time::Instant::now();
                let res = joint_nonlinear_complexity(&s, n, r, opts).expect("cells were validated");
                let mut row = ReportRow::new(&s, n, r, res.value, res.status);
                if let Some(bound) = spec.and_then(|b| b.bound(n, r).ok()) {
                    row = row.with_bound(bound);
                }
                if timing {
                    row.millis = start.elapsed().as_millis() as u64;
                }
                row
            })
            .collect::<Vec<_>>()
    })?;
    emit(&render(&rows, cfg.format())?, cfg.output.as_deref())?;
    Ok(EXIT_OK)
}

/// Runs the bound sweep; exit 1 when an exact cell falls below its bound.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<i32, CliError> {
    let s = cfg.multisequence()?;
    let spec = BoundSpec::for_provenance(s.provenance()).map_err(|e| CliError::Config(e.to_string()))?;
    let max_n = spec.max_n().min(s.len());
    let n_list = n_values(cfg, &s, (2..=max_n).collect())?;
    let r_list = r_values(cfg, (1..=spec.max_r()).collect())?;
    let opts = SweepOptions {
        complexity: ComplexityOptions {
            budget: cfg.budget_from_env()?,
            witness: true,
        },
        timing: cfg.timing,
        workers: cfg.workers()?,
    };
    let report = verify_sweep(&s, &spec, &n_list, &r_list, opts).map_err(|e| CliError::Config(e.to_string()))?;
    let rows: Vec<ReportRow> = report.rows.iter().map(ReportRow::from).collect();
    emit(&render(&rows, cfg.format())?, cfg.output.as_deref())?;

    if let Some(path) = &cfg.compare {
        let trials = cfg.trials.unwrap_or(20);
        let seed = cfg.seed.unwrap_or(0);
        let ctx = s.field().clone();
        let cmp = in_pool(cfg.workers()?, || {
            juxtapose(&report, &ctx, trials, seed, opts.complexity.budget)
        })?
        .map_err(|e| CliError::Config(e.to_string()))?;
        emit(&render(&cmp, cfg.format())?, Some(path))?;
    }

    let violations = report.violations().count();
    eprintln!(
        "{} cells, {} truncated, {} violations",
        report.rows.len(),
        report.truncated(),
        violations
    );
    for row in report.violations() {
        eprintln!(
            "violation: n={} r={} value={} < ceil({})",
            row.n,
            row.r,
            row.value,
            row.bound.value()
        );
    }
    Ok(if violations == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

pub fn cmd_baseline(cfg: &ExperimentConfig) -> Result<i32, CliError> {
    let ctx = cfg.base_ctx()?;
    let dims = narrow::<usize>(
        &cfg.m
            .as_ref()
            .ok_or_else(|| CliError::Config("--m is required".into()))?
            .0,
        "m",
    )?;
    let lens = narrow::<usize>(
        &cfg.n
            .as_ref()
            .ok_or_else(|| CliError::Config("--n is required".into()))?
            .0,
        "n",
    )?;
    let r_list = r_values(cfg, vec![1])?;
    let trials = cfg.trials.unwrap_or(100);
    let seed = cfg.seed.unwrap_or(0);
    let budget = cfg.budget_from_env()?;
    let ctx: Arc<_> = ctx;

    let stats = in_pool(cfg.workers()?, || {
        let mut out = Vec::new();
        for &m in &dims {
            for &n in &lens {
                for &r in &r_list {
                    out.push(random_baseline(&ctx, m, n, r, trials, seed, budget)?);
                }
            }
        }
        Ok::<_, crate::bounds::BoundError>(out)
    })?
    .map_err(|e| CliError::Config(e.to_string()))?;
    emit(&render(&stats, cfg.format())?, cfg.output.as_deref())?;
    Ok(EXIT_OK)
}
