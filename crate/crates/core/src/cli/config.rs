//! Experiment configuration: command-line flags, `--config` files and the
//! `NLCSEQ_BUDGET` environment variable.
//!
//! A config file holds one `key=value` pair per line. Keys are the long flag
//! names without dashes (`n-list` and `n_list` are both accepted). Blank
//! lines and lines starting with `#` are ignored. Flags given on the command
//! line win over the file; the environment variable only replaces the
//! built-in default budget.
//!
//! Lists (`n-list`, `r-list`, `m`, `n`, `rotate`) are comma separated and
//! may contain inclusive ranges: `2-5,8` is `2,3,4,5,8`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, ValueEnum};

use super::format::read_multisequence;
use super::CliError;
use crate::complexity::DEFAULT_BUDGET;
use crate::gf::{make_field, prime_power, FieldCtx};
use crate::hermitian::{enumerate_points, generate_hermitian, plan_hermitian_with, HermitianMode, HermitianOptions};
use crate::multiseq::Multisequence;
use crate::rational::{generate_rational, plan_rational};

pub const BUDGET_ENV: &str = "NLCSEQ_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Rational,
    HermitianSigma,
    HermitianPhi,
    File,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Comma-separated values with inclusive `a-b` ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<u64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{}` is not a valid number", t.trim()))
        };
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            if part.is_empty() {
                return Err(format!("empty entry in list `{s}`"));
            }
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (num(a)?, num(b)?);
                    if a > b {
                        return Err(format!("empty range `{part}`"));
                    }
                    out.extend(a..=b);
                }
                None => out.push(num(part)?),
            }
        }
        Ok(List(out))
    }
}

impl fmt::Display for List {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// All experiment parameters; every command reads the subset it needs.
#[derive(Clone, Debug, Default, Args)]
pub struct ExperimentConfig {
    #[arg(long, value_enum)]
    pub construction: Option<Construction>,
    /// Field size for `rational` and `file`, curve parameter for the Hermitian constructions.
    #[arg(long)]
    pub q: Option<u64>,
    /// Characteristic; with `--k` an alternative to `--q`.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Orbit length of the rational construction.
    #[arg(long)]
    pub d: Option<u64>,
    /// Dimension (number of sequences).
    #[arg(long = "N")]
    pub n_dim: Option<usize>,
    /// Orbits per sequence.
    #[arg(long = "M")]
    pub m_blocks: Option<usize>,
    /// Starting offset of each orbit, row-major over the N x M grid.
    #[arg(long)]
    pub rotate: Option<List>,
    /// Build Hermitian plans outside the lower-bound hypotheses.
    #[arg(long)]
    pub allow_unguaranteed: bool,
    /// Multisequence file for `--construction file`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n_list: Option<List>,
    #[arg(long)]
    pub r_list: Option<List>,
    /// Monomial budget per linear system.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Record per-cell wall time (reports are then no longer reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Baseline dimensions.
    #[arg(long)]
    pub m: Option<List>,
    /// Baseline lengths.
    #[arg(long)]
    pub n: Option<List>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// With `verify`: also write random baselines of matching shape to this file.
    #[arg(long)]
    pub compare: Option<PathBuf>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| bad(format!("config key `{key}`: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(bad(format!(
            "config key `{key}`: expected true or false, got `{value}`"
        ))),
    }
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, false).map_err(|e| bad(format!("config key `{key}`: {e}")))
}

fn set<T>(slot: &mut Option<T>, v: T) {
    if slot.is_none() {
        *slot = Some(v);
    }
}

impl ExperimentConfig {
    /// Fills unset fields from `key=value` text.
    pub fn merge_text(&mut self, text: &str, base: &Path) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("config line {}: expected key=value", no + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let path = || base.join(value);
            match key.as_str() {
                "construction" => set(&mut self.construction, parse_enum("construction", value)?),
                "q" => set(&mut self.q, parse_value(&key, value)?),
                "p" => set(&mut self.p, parse_value(&key, value)?),
                "k" => set(&mut self.k, parse_value(&key, value)?),
                "d" => set(&mut self.d, parse_value(&key, value)?),
                "N" => set(&mut self.n_dim, parse_value(&key, value)?),
                "M" => set(&mut self.m_blocks, parse_value(&key, value)?),
                "rotate" => set(&mut self.rotate, parse_value(&key, value)?),
                "allow-unguaranteed" => self.allow_unguaranteed |= parse_bool(&key, value)?,
                "input" => set(&mut self.input, path()),
                "n-list" => set(&mut self.n_list, parse_value(&key, value)?),
                "r-list" => set(&mut self.r_list, parse_value(&key, value)?),
                "budget" => set(&mut self.budget, parse_value(&key, value)?),
                "format" => set(&mut self.format, parse_enum("format", value)?),
                "output" => set(&mut self.output, path()),
                "seed" => set(&mut self.seed, parse_value(&key, value)?),
                "workers" => set(&mut self.workers, parse_value(&key, value)?),
                "timing" => self.timing |= parse_bool(&key, value)?,
                "m" => set(&mut self.m, parse_value(&key, value)?),
                "n" => set(&mut self.n, parse_value(&key, value)?),
                "trials" => set(&mut self.trials, parse_value(&key, value)?),
                "compare" => set(&mut self.compare, path()),
                other => return Err(bad(format!("config line {}: unknown key `{other}`", no + 1))),
            }
        }
        Ok(())
    }

    /// Fills unset fields from a config file. Relative paths inside the file
    /// resolve against the file's directory.
    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        self.merge_text(&text, base)
    }

    /// Flag or file value, else `NLCSEQ_BUDGET`, else the built-in default.
    pub fn budget(&self, env: Option<&str>) -> Result<u64, CliError> {
        let budget = match (self.budget, env) {
            (Some(b), _) => b,
            (None, Some(v)) => v
                .trim()
                .parse()
                .map_err(|_| bad(format!("{BUDGET_ENV} must be a positive integer, got `{v}`")))?,
            (None, None) => DEFAULT_BUDGET,
        };
        if budget == 0 {
            return Err(bad("budget must be positive"));
        }
        Ok(budget)
    }

    pub fn budget_from_env(&self) -> Result<u64, CliError> {
        self.budget(std::env::var(BUDGET_ENV).ok().as_deref())
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn workers(&self) -> Result<Option<usize>, CliError> {
        match self.workers {
            Some(0) => Err(bad("workers must be at least 1")),
            w => Ok(w),
        }
    }

    /// `(p, k)` with `p^k` equal to the `q` parameter.
    pub fn base_field(&self) -> Result<(u64, u32), CliError> {
        let from_pk = match (self.p, self.k) {
            (Some(p), k) => {
                let k = k.unwrap_or(1);
                let q = p
                    .checked_pow(k)
                    .ok_or_else(|| bad(format!("p^k = {p}^{k} is too large")))?;
                match prime_power(q) {
                    Some((b, e)) if b == p && e == k => Some((p, k)),
                    _ => return Err(bad(format!("p = {p} must be prime"))),
                }
            }
            (None, Some(_)) => return Err(bad("--k needs --p")),
            (None, None) => None,
        };
        match (self.q, from_pk) {
            (Some(q), Some((p, k))) if p.pow(k) != q => Err(bad(format!("q = {q} differs from p^k = {p}^{k}"))),
            (_, Some(pk)) => Ok(pk),
            (Some(q), None) => prime_power(q).ok_or_else(|| bad(format!("q = {q} is not a prime power"))),
            (None, None) => Err(bad("field not specified: give --q or --p/--k")),
        }
    }

    pub fn base_ctx(&self) -> Result<Arc<FieldCtx>, CliError> {
        let (p, k) = self.base_field()?;
        make_field(p, k).map(Arc::new).map_err(|e| bad(e.to_string()))
    }

    pub fn construction(&self) -> Result<Construction, CliError> {
        match (self.construction, &self.input) {
            (Some(c), _) => Ok(c),
            (None, Some(_)) => Ok(Construction::File),
            (None, None) => Err(bad("--construction (or --input) is required")),
        }
    }

    fn dims(&self) -> Result<(usize, usize), CliError> {
        match (self.n_dim, self.m_blocks) {
            (Some(n), Some(m)) if n >= 1 && m >= 1 => Ok((n, m)),
            (Some(_), Some(_)) => Err(bad("N >= 1 and M >= 1 required")),
            _ => Err(bad("--N and --M are required")),
        }
    }

    /// Generates or loads the multisequence the config describes.
    pub fn multisequence(&self) -> Result<Multisequence, CliError> {
        let construction = self.construction()?;
        if construction != Construction::File && self.input.is_some() {
            return Err(bad("--input only applies to --construction file"));
        }
        if self.rotate.is_some() && construction != Construction::Rational {
            return Err(bad("rotate only applies to the rational construction"));
        }
        match construction {
            Construction::Rational => {
                let (n_dim, m_blocks) = self.dims()?;
                let d = self
                    .d
                    .ok_or_else(|| bad("--d is required for the rational construction"))?;
                let mut plan = plan_rational(self.base_ctx()?, d, n_dim, m_blocks).map_err(|e| bad(e.to_string()))?;
                if let Some(List(rot)) = &self.rotate {
                    if rot.len() != n_dim * m_blocks {
                        return Err(bad(format!(
                            "rotate needs N*M = {} offsets, got {}",
                            n_dim * m_blocks,
                            rot.len()
                        )));
                    }
                    let grid = rot
                        .chunks(m_blocks)
                        .map(|r| r.iter().map(|&j| j as usize).collect())
                        .collect();
                    plan = plan.with_rotation(grid).map_err(|e| bad(e.to_string()))?;
                }
                Ok(generate_rational(&plan))
            }
            Construction::HermitianSigma | Construction::HermitianPhi => {
                let (n_dim, m_blocks) = self.dims()?;
                if self.d.is_some() {
                    return Err(bad("--d only applies to the rational construction"));
                }
                let (p, k) = self.base_field()?;
                let q = p.pow(k);
                let ctx = make_field(p, 2 * k).map(Arc::new).map_err(|e| bad(e.to_string()))?;
                let curve = Arc::new(enumerate_points(ctx, q).map_err(|e| bad(e.to_string()))?);
                let mode = match construction {
                    Construction::HermitianSigma => HermitianMode::Sigma,
                    _ => HermitianMode::Phi,
                };
                let opts = HermitianOptions {
                    allow_unguaranteed: self.allow_unguaranteed,
                };
                let plan = plan_hermitian_with(curve, mode, n_dim, m_blocks, opts).map_err(|e| bad(e.to_string()))?;
                Ok(generate_hermitian(&plan))
            }
            Construction::File => {
                let path = self
                    .input
                    .as_ref()
                    .ok_or_else(|| bad("--construction file needs --input"))?;
                let fallback = if self.q.is_some() || self.p.is_some() {
                    Some(self.base_ctx()?)
                } else {
                    None
                };
                read_multisequence(path, fallback)
            }
        }
    }
}

/// Converts list entries, rejecting values that do not fit.
pub fn narrow<T: TryFrom<u64>>(values: &[u64], what: &str) -> Result<Vec<T>, CliError> {
    values
        .iter()
        .map(|&v| T::try_from(v).map_err(|_| bad(format!("{what} entry {v} is too large"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_syntax() {
        assert_eq!("2-5,8".parse::<List>().unwrap().0, vec![2, 3, 4, 5, 8]);
        assert_eq!(" 1 , 3 ".parse::<List>().unwrap().0, vec![1, 3]);
        assert!("".parse::<List>().is_err());
        assert!("5-2".parse::<List>().is_err());
        assert!("a".parse::<List>().is_err());
        assert_eq!(List(vec![1, 2]).to_string(), "1,2");
    }

    #[test]
    fn flags_win_over_file() {
        let mut cfg = ExperimentConfig {
            q: Some(13),
            ..Default::default()
        };
        cfg.merge_text(
            "# comment\nq=61\nd = 3\nn_list=2-3\nconstruction=rational\n",
            Path::new("/tmp"),
        )
        .unwrap();
        assert_eq!(cfg.q, Some(13));
        assert_eq!(cfg.d, Some(3));
        assert_eq!(cfg.n_list.unwrap().0, vec![2, 3]);
        assert_eq!(cfg.construction, Some(Construction::Rational));
    }

    #[test]
    fn file_errors() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.merge_text("nonsense\n", Path::new(".")).is_err());
        assert!(cfg.merge_text("colour=blue\n", Path::new(".")).is_err());
        assert!(cfg.merge_text("q=x\n", Path::new(".")).is_err());
        assert!(cfg.merge_text("construction=elliptic\n", Path::new(".")).is_err());
    }

    #[test]
    fn budget_precedence() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.budget(None).unwrap(), DEFAULT_BUDGET);
        assert_eq!(cfg.budget(Some("77")).unwrap(), 77);
        assert!(cfg.budget(Some("lots")).is_err());
        cfg.budget = Some(5);
        assert_eq!(cfg.budget(Some("77")).unwrap(), 5);
        cfg.budget = Some(0);
        assert!(cfg.budget(None).is_err());
    }

    #[test]
    fn field_parameters() {
        let cfg = |q, p, k| ExperimentConfig {
            q,
            p,
            k,
            ..Default::default()
        };
        assert_eq!(cfg(Some(9), None, None).base_field().unwrap(), (3, 2));
        assert_eq!(cfg(None, Some(3), Some(2)).base_field().unwrap(), (3, 2));
        assert_eq!(cfg(None, Some(13), None).base_field().unwrap(), (13, 1));
        assert!(cfg(Some(8), Some(3), Some(2)).base_field().is_err());
        assert!(cfg(Some(12), None, None).base_field().is_err());
        assert!(cfg(None, Some(4), Some(1)).base_field().is_err());
        assert!(cfg(None, None, None).base_field().is_err());
    }

    #[test]
    fn hypothesis_named_in_error() {
        let cfg = ExperimentConfig {
            construction: Some(Construction::Rational),
            q: Some(7),
            d: Some(3),
            n_dim: Some(1),
            m_blocks: Some(1),
            ..Default::default()
        };
        let err = cfg.multisequence().unwrap_err().to_string();
        assert!(err.contains("(q-1)/d >= 3"), "{err}");
    }
}
