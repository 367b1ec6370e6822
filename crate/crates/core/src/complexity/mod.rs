//! Joint nonlinear complexity of multisequences.
//!
//! `N_r(S_n)` is the least arity `u` of a polynomial with degree at most `r`
//! in each variable that generates every `n`-prefix of `S` as a feedback
//! recurrence. Existence of such a polynomial for a fixed `u` is a linear
//! question in its `(r+1)^u` coefficients; for `r >= q - 1` every map
//! `F_q^u -> F_q` is a polynomial, and the answer reduces to window
//! uniqueness (maximum-order complexity).

mod poly;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem, LinearSystem, SpanSolver};
use crate::multiseq::Multisequence;

pub use poly::{exponent_vectors, replay, GeneratingPolynomial};

/// Default cap on the number of monomials `(r+1)^u` per existence test.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexityError {
    #[error("{0} monomials exceed the budget")]
    BudgetExceeded(u64),
    #[error("arity u = {u} outside [1, n-1] for n = {n}")]
    BadArity { u: usize, n: usize },
    #[error("prefix length n = {n} outside [1, {len}]")]
    BadLength { n: usize, len: usize },
    #[error("degree cap r must be at least 1")]
    BadDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    /// The monomial budget stopped the search; `value` is a lower bound.
    Truncated,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Truncated => "truncated",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityResult {
    pub value: usize,
    pub status: Status,
    /// Generating polynomial of arity `value`, when `1 <= value <= n-1`.
    ///
    /// Absent for truncated results, and on the `r >= q-1` path when the
    /// interpolating polynomial has more than `budget` monomials or witnesses
    /// were not requested.
    pub witness: Option<GeneratingPolynomial>,
    /// Largest arity examined.
    pub u_searched: usize,
    /// Degree cap actually used, `min(r, q-1)`.
    pub r_effective: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexityOptions {
    pub budget: u64,
    pub witness: bool,
}

impl Default for ComplexityOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            witness: true,
        }
    }
}

fn check_prefix(s: &Multisequence, n: usize) -> Result<(), ComplexityError> {
    if n == 0 || n > s.len() {
        return Err(ComplexityError::BadLength { n, len: s.len() });
    }
    Ok(())
}

fn monomial_count(r: u32, u: usize) -> Option<u64> {
    (r as u64 + 1).checked_pow(u.try_into().ok()?)
}

/// Distinct windows of length `u` with their forced successors.
struct Constraints<'a> {
    windows: Vec<&'a [FieldElem]>,
    targets: Vec<FieldElem>,
}

/// Windows in sequence-major, then position order. `None` when one window
/// is followed by two different symbols.
fn collect_constraints(s: &Multisequence, n: usize, u: usize) -> Option<Constraints<'_>> {
    let mut seen: HashMap<&[FieldElem], FieldElem> = HashMap::new();
    let mut out = Constraints {
        windows: Vec::new(),
        targets: Vec::new(),
    };
    for row in s.rows() {
        for j in 0..n - u {
            let w = &row[j..j + u];
            let t = row[j + u];
            match seen.get(w) {
                Some(&prev) if prev != t => return None,
                Some(_) => {}
                None => {
                    seen.insert(w, t);
                    out.windows.push(w);
                    out.targets.push(t);
                }
            }
        }
    }
    Some(out)
}

fn has_conflict(s: &Multisequence, n: usize, u: usize) -> bool {
    collect_constraints(s, n, u).is_none()
}

/// The full coefficient system: one row per `(sequence, j)` constraint and
/// one unknown per exponent vector in lexicographic order.
pub fn generator_system(s: &Multisequence, n: usize, u: usize, r: u32) -> LinearSystem {
    let ctx = s.field();
    let monomials: Vec<Vec<u32>> = exponent_vectors(u, r).collect();
    let mut sys = LinearSystem::new(monomials.len());
    for row in s.rows() {
        for j in 0..n - u {
            let w = &row[j..j + u];
            let coeffs = monomials
                .iter()
                .map(|e| {
                    e.iter()
                        .zip(w)
                        .fold(ctx.one(), |acc, (&ei, &x)| ctx.mul(acc, ctx.pow(x, ei as u64)))
                })
                .collect();
            sys.push_row(coeffs, row[j + u])
                .expect("row width matches monomial count");
        }
    }
    sys
}

fn decode_exponents(mut id: u64, u: usize, base: u64) -> Vec<u32> {
    let mut e = vec![0u32; u];
    for slot in e.iter_mut().rev() {
        *slot = (id % base) as u32;
        id /= base;
    }
    e
}

/// Looks for a polynomial of arity `u`, degree at most `r` per variable,
/// generating every `n`-prefix of `s`.
///
/// Identical windows are merged (a window with two successors fails at
/// once), then monomial columns are streamed in lexicographic order into an
/// incremental span test, stopping as soon as the successor vector is
/// reachable.
pub fn exists_generator(
    s: &Multisequence,
    n: usize,
    u: usize,
    r: u32,
    budget: u64,
) -> Result<Option<GeneratingPolynomial>, ComplexityError> {
    check_prefix(s, n)?;
    if u == 0 || u >= n {
        return Err(ComplexityError::BadArity { u, n });
    }
    if r == 0 {
        return Err(ComplexityError::BadDegree);
    }
    let ncols = monomial_count(r, u)
        .filter(|&c| c <= budget)
        .ok_or(ComplexityError::BudgetExceeded(
            monomial_count(r, u).unwrap_or(u64::MAX),
        ))?;

    let Some(cons) = collect_constraints(s, n, u) else {
        return Ok(None);
    };
    let ctx: &FieldCtx = s.field();
    let m = cons.windows.len();
    let width = r as usize + 1;

    // powers[k * width + e][w] = windows[w][k]^e
    let mut powers = vec![vec![ctx.one(); m]; u * width];
    for k in 0..u {
        for (w, window) in cons.windows.iter().enumerate() {
            let x = window[k];
            let mut acc = ctx.one();
            for e in 0..width {
                powers[k * width + e][w] = acc;
                acc = ctx.mul(acc, x);
            }
        }
    }

    let mut solver = SpanSolver::new(ctx, cons.targets.clone());
    let mut exps = vec![0usize; u];
    let mut levels = vec![vec![ctx.one(); m]; u + 1];
    let mut dirty = 0;
    for id in 0..ncols as usize {
        for k in dirty..u {
            let (lo, hi) = levels.split_at_mut(k + 1);
            let col = &powers[k * width + exps[k]];
            for ((dst, &src), &pw) in hi[0].iter_mut().zip(&lo[k]).zip(col) {
                *dst = ctx.mul(src, pw);
            }
        }
        if solver.push(id, levels[u].clone()) {
            break;
        }
        match (0..u).rev().find(|&k| exps[k] < r as usize) {
            Some(k) => {
                exps[k] += 1;
                exps[k + 1..].iter_mut().for_each(|e| *e = 0);
                dirty = k;
            }
            None => break,
        }
    }

    Ok(solver.solution().map(|sparse| {
        let coeffs = sparse
            .into_iter()
            .map(|(id, c)| (decode_exponents(id as u64, u, width as u64), c))
            .collect();
        GeneratingPolynomial::new(u, r, coeffs)
    }))
}

/// Maximum-order complexity: least `u` such that no length-`u` window of any
/// `n`-prefix is followed by two distinct symbols. `0` for an all-zero
/// prefix, `n` when no `u <= n-1` works.
pub fn max_order_complexity_fast(s: &Multisequence, n: usize) -> Result<usize, ComplexityError> {
    check_prefix(s, n)?;
    if s.prefix_is_zero(n) {
        return Ok(0);
    }
    // conflict-freeness is monotone in u: windows of length u+1 refine those of length u
    let (mut lo, mut hi) = (1, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if has_conflict(s, n, mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Coefficients of `1 - (x - a)^{q-1}`, the indicator of `a` on `F_q`.
fn indicator_poly(ctx: &FieldCtx, a: FieldElem) -> Vec<FieldElem> {
    let q = ctx.size() as usize;
    let mut pw = vec![ctx.one()];
    let neg_a = ctx.neg(a);
    for _ in 0..q - 1 {
        let mut next = vec![ctx.zero(); pw.len() + 1];
        for (i, &c) in pw.iter().enumerate() {
            next[i + 1] = ctx.add(next[i + 1], c);
            next[i] = ctx.add(next[i], ctx.mul(c, neg_a));
        }
        pw = next;
    }
    let mut out: Vec<FieldElem> = pw.iter().map(|&c| ctx.neg(c)).collect();
    out[0] = ctx.add(out[0], ctx.one());
    out
}

/// Interpolating polynomial through the distinct windows, degree `q-1` per
/// variable; `None` if it would exceed `budget` monomials.
fn interpolation_witness(s: &Multisequence, n: usize, u: usize, budget: u64) -> Option<GeneratingPolynomial> {
    let ctx: &FieldCtx = s.field();
    let q = ctx.size() as usize;
    let ncols = monomial_count(q as u32 - 1, u).filter(|&c| c <= budget)? as usize;
    let cons = collect_constraints(s, n, u)?;
    let indicators: Vec<Vec<FieldElem>> = ctx.elements().map(|a| indicator_poly(ctx, a)).collect();

    let mut dense = vec![ctx.zero(); ncols];
    fn expand(ctx: &FieldCtx, factors: &[&[FieldElem]], acc: FieldElem, id: usize, dense: &mut [FieldElem]) {
        let Some((first, rest)) = factors.split_first() else {
            dense[id] = ctx.add(dense[id], acc);
            return;
        };
        for (e, &c) in first.iter().enumerate() {
            if !c.is_zero() {
                expand(ctx, rest, ctx.mul(acc, c), id * first.len() + e, dense);
            }
        }
    }
    for (w, &t) in cons.windows.iter().zip(&cons.targets) {
        if t.is_zero() {
            continue;
        }
        let factors: Vec<&[FieldElem]> = w.iter().map(|x| indicators[x.index() as usize].as_slice()).collect();
        expand(ctx, &factors, t, 0, &mut dense);
    }
    let coeffs = dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(id, c)| (decode_exponents(id as u64, u, q as u64), c))
        .collect();
    Some(GeneratingPolynomial::new(u, q as u32 - 1, coeffs))
}

/// True when `f` regenerates every `n`-prefix of `s` from its first `u` terms.
pub fn witness_replays(s: &Multisequence, n: usize, f: &GeneratingPolynomial) -> bool {
    let u = f.arity();
    if u == 0 || u > n {
        return false;
    }
    let seeds: Vec<Vec<FieldElem>> = s.rows().iter().map(|row| row[..u].to_vec()).collect();
    let replayed = replay(s.field(), f, &seeds, n);
    replayed.rows().iter().zip(s.rows()).all(|(a, b)| a[..] == b[..n])
}

/// Exact `N_r(S_n)`, downgraded to a truncated lower bound when the
/// monomial budget stops the search.
pub fn joint_nonlinear_complexity(
    s: &Multisequence,
    n: usize,
    r: u32,
    opts: ComplexityOptions,
) -> Result<ComplexityResult, ComplexityError> {
    check_prefix(s, n)?;
    if r == 0 {
        return Err(ComplexityError::BadDegree);
    }
    let r_eff = r.min(s.field().group_order());
    let mut result = ComplexityResult {
        value: 0,
        status: Status::Exact,
        witness: None,
        u_searched: 0,
        r_effective: r_eff,
    };
    if s.prefix_is_zero(n) {
        return Ok(result);
    }

    // no polynomial class can beat arbitrary maps
    let max_order = max_order_complexity_fast(s, n)?;
    if r_eff == s.field().group_order() {
        result.value = max_order;
        result.u_searched = max_order.min(n - 1);
        if opts.witness && max_order < n {
            result.witness = interpolation_witness(s, n, max_order, opts.budget);
        }
    } else {
        result.value = n;
        for u in max_order..n {
            result.u_searched = u;
            match exists_generator(s, n, u, r_eff, opts.budget) {
                Ok(Some(f)) => {
                    result.value = u;
                    result.witness = opts.witness.then_some(f);
                    break;
                }
                Ok(None) => {}
                Err(ComplexityError::BudgetExceeded(_)) => {
                    result.value = u;
                    result.status = Status::Truncated;
                    result.u_searched = u - 1;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
    }

    if let Some(f) = &result.witness {
        assert!(
            witness_replays(s, n, f),
            "witness of arity {} does not replay",
            f.arity()
        );
    }
    Ok(result)
}
