use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{BoundError, SweepReport};
use crate::complexity::{joint_nonlinear_complexity, ComplexityOptions, Status};
use crate::gf::FieldCtx;
use crate::multiseq::{Multisequence, Provenance};

/// Uniform multisequence for one trial.
///
/// Trial `t` draws from ChaCha20 seeded with `seed_from_u64(seed)` on stream
/// `t`; entries are taken row by row with `gen_range(0..q)` and read as
/// canonical element indices. Trials are therefore independent of each
/// other and of the number of workers.
pub fn random_multisequence(ctx: &Arc<FieldCtx>, m: usize, n: usize, seed: u64, trial: u64) -> Multisequence {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let q = ctx.size();
    let rows = (0..m)
        .map(|_| (0..n).map(|_| ctx.elem(rng.gen_range(0..q))).collect())
        .collect();
    Multisequence::new(
        ctx.clone(),
        rows,
        Provenance::External {
            label: format!("random seed={seed} trial={trial}"),
        },
    )
    .expect("random rows share a length")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineStats {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub r: u32,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    pub truncated: usize,
    /// `ln(m n)`, the heuristic order of magnitude for random data.
    pub ln_mn: f64,
    pub log2_mn: f64,
    #[serde(skip)]
    pub values: Vec<usize>,
}

/// Statistics of `N_r` over `trials` seeded uniform multisequences of
/// dimension `m` and length `n`.
pub fn random_baseline(
    ctx: &Arc<FieldCtx>,
    m: usize,
    n: usize,
    r: u32,
    trials: usize,
    seed: u64,
    budget: u64,
) -> Result<BaselineStats, BoundError> {
    if trials == 0 || m == 0 || n == 0 || r == 0 {
        return Err(BoundError::BadParams("trials, m, n and r must be positive".into()));
    }
    let opts = ComplexityOptions { budget, witness: false };
    let results: Vec<(usize, Status)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = random_multisequence(ctx, m, n, seed, t);
            let res = joint_nonlinear_complexity(&s, n, r, opts).expect("validated parameters");
            (res.value, res.status)
        })
        .collect();
    let values: Vec<usize> = results.iter().map(|&(v, _)| v).collect();
    let mn = (m * n) as f64;
    Ok(BaselineStats {
        q: ctx.size(),
        m,
        n,
        r,
        trials,
        seed,
        mean: values.iter().sum::<usize>() as f64 / trials as f64,
        min: *values.iter().min().expect("trials >= 1"),
        max: *values.iter().max().expect("trials >= 1"),
        truncated: results.iter().filter(|&&(_, s)| s == Status::Truncated).count(),
        ln_mn: mn.ln(),
        log2_mn: mn.log2(),
        values,
    })
}

/// One sweep cell next to the random baseline of matching shape.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub construction: &'static str,
    pub n_dim: usize,
    pub n: usize,
    pub r: u32,
    pub constructed: usize,
    pub bound_ceil: i64,
    pub random_mean: f64,
    pub random_max: usize,
    pub ln_mn: f64,
}

/// Puts each sweep row beside random multisequences with the same field,
/// dimension, length and `r`.
pub fn juxtapose(
    report: &SweepReport,
    ctx: &Arc<FieldCtx>,
    trials: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<ComparisonRow>, BoundError> {
    report
        .rows
        .iter()
        .map(|row| {
            let stats = random_baseline(ctx, row.n_dim, row.n, row.r, trials, seed, budget)?;
            Ok(ComparisonRow {
                construction: row.construction,
                n_dim: row.n_dim,
                n: row.n,
                r: row.r,
                constructed: row.value,
                bound_ceil: row.bound.ceil(),
                random_mean: stats.mean,
                random_max: stats.max,
                ln_mn: stats.ln_mn,
            })
        })
        .collect()
}
