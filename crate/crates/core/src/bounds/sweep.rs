use std::time::Instant;

use rayon::prelude::*;

use super::{BoundError, BoundSpec, BoundValue};
use crate::complexity::{joint_nonlinear_complexity, witness_replays, ComplexityOptions, Status};
use crate::multiseq::Multisequence;

#[derive(Clone, Copy, Debug, Default)]
pub struct SweepOptions {
    pub complexity: ComplexityOptions,
    /// Record wall time per cell; off keeps reports byte-reproducible.
    pub timing: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub construction: &'static str,
    pub q: u64,
    pub d_or_p: u64,
    pub n_dim: usize,
    pub m_blocks: usize,
    pub n: usize,
    pub r: u32,
    pub value: usize,
    pub status: Status,
    pub bound: BoundValue,
    /// `value >= ceil(bound)`; only conclusive when `status` is exact.
    pub satisfied: bool,
    /// Whether a shipped witness replayed every prefix; `None` without a witness.
    pub witness_ok: Option<bool>,
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Exact rows whose computed value falls below the bound.
    pub fn violations(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.status == Status::Exact && !r.satisfied)
    }

    pub fn all_exact_satisfied(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn truncated(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Truncated).count()
    }
}

/// Cell pairs `(n, r)` in report order.
fn cells(n_list: &[usize], r_list: &[u32]) -> Vec<(usize, u32)> {
    n_list
        .iter()
        .flat_map(|&n| r_list.iter().map(move |&r| (n, r)))
        .collect()
}

/// Computes `N_r(S_n)` for every `(n, r)` and compares it with the bound.
///
/// Cells run concurrently; rows come back ordered by `n`, then `r`, as listed.
pub fn verify_sweep(
    s: &Multisequence,
    spec: &BoundSpec,
    n_list: &[usize],
    r_list: &[u32],
    opts: SweepOptions,
) -> Result<SweepReport, BoundError> {
    if !spec.matches(s.provenance()) {
        return Err(BoundError::ProvenanceMismatch {
            expected: format!("{} with {:?}", spec.tag(), spec.dims()),
            found: s.provenance().to_string(),
        });
    }
    if let Some(&n) = n_list.iter().find(|&&n| n > s.len()) {
        return Err(BoundError::BadParams(format!(
            "n = {n} exceeds sequence length {}",
            s.len()
        )));
    }
    let cells = cells(n_list, r_list);
    let bounds = cells
        .iter()
        .map(|&(n, r)| spec.bound(n, r))
        .collect::<Result<Vec<_>, _>>()?;

    let (n_dim, m_blocks) = spec.dims();
    let run = || {
        cells
            .par_iter()
            .zip(bounds.par_iter())
            .map(|(&(n, r), &bound)| {
                let start = Instant::now();
                let res = joint_nonlinear_complexity(s, n, r, opts.complexity)
                    .expect("cell parameters were validated against the bound");
                let millis = if opts.timing {
                    start.elapsed().as_millis() as u64
                } else {
                    0
                };
                SweepRow {
                    construction: spec.tag(),
                    q: spec.q(),
                    d_or_p: spec.orbit_len(),
                    n_dim,
                    m_blocks,
                    n,
                    r,
                    value: res.value,
                    status: res.status,
                    bound,
                    satisfied: res.value as i64 >= bound.ceil(),
                    witness_ok: res.witness.as_ref().map(|f| witness_replays(s, n, f)),
                    millis,
                }
            })
            .collect::<Vec<_>>()
    };
    let rows = match opts.workers {
        None => run(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| BoundError::Pool(e.to_string()))?
            .install(run),
    };
    Ok(SweepReport { rows })
}
