//! Consistency-checking linear solvers over `F_q`.

use super::{FieldCtx, FieldElem, GfError};

/// A linear system `matrix * x = rhs` over a finite field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    matrix: Vec<Vec<FieldElem>>,
    rhs: Vec<FieldElem>,
    ncols: usize,
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        Self {
            matrix: Vec::new(),
            rhs: Vec::new(),
            ncols,
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<FieldElem>, rhs: FieldElem) -> Result<(), GfError> {
        if coeffs.len() != self.ncols {
            return Err(GfError::RowWidth {
                expected: self.ncols,
                got: coeffs.len(),
            });
        }
        self.matrix.push(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.matrix.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[FieldElem], FieldElem)> {
        self.matrix.iter().map(Vec::as_slice).zip(self.rhs.iter().copied())
    }

    /// True when `x` satisfies every row exactly.
    pub fn is_solution(&self, ctx: &FieldCtx, x: &[FieldElem]) -> bool {
        x.len() == self.ncols
            && self.rows().all(|(row, b)| {
                let lhs = row
                    .iter()
                    .zip(x)
                    .fold(ctx.zero(), |acc, (&a, &xi)| ctx.add(acc, ctx.mul(a, xi)));
                lhs == b
            })
    }
}

/// Gauss-Jordan elimination on the augmented matrix.
///
/// Returns a solution (free variables set to zero) iff the system is consistent.
pub fn solve_consistent(sys: &LinearSystem, ctx: &FieldCtx) -> Option<Vec<FieldElem>> {
    let ncols = sys.ncols;
    let mut aug: Vec<Vec<FieldElem>> = sys
        .rows()
        .map(|(row, b)| {
            let mut r = row.to_vec();
            r.push(b);
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..aug.len()).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, pr);
        let inv = ctx.inv(aug[rank][col]).expect("pivot is nonzero");
        for v in aug[rank].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        let pivot_row = aug[rank].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = ctx.sub(*v, ctx.mul(c, pv));
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    if aug[rank..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![ctx.zero(); ncols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[r][ncols];
    }
    Some(x)
}

/// Decides whether a fixed target vector lies in the span of columns fed
/// one at a time, without materializing the full matrix.
///
/// Columns are reduced against an echelon basis as they arrive; the target
/// residual is updated on every new basis vector, so the solver reports
/// success as soon as the target is reachable. Each basis vector remembers
/// its expression in terms of the accepted input columns, which yields an
/// explicit solution.
pub struct SpanSolver<'a> {
    ctx: &'a FieldCtx,
    basis: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
    /// `basis[i] = sum_j combos[i][j] * column(accepted[j])`
    combos: Vec<Vec<FieldElem>>,
    accepted: Vec<usize>,
    residual: Vec<FieldElem>,
    weights: Vec<FieldElem>,
}

impl<'a> SpanSolver<'a> {
    pub fn new(ctx: &'a FieldCtx, target: Vec<FieldElem>) -> Self {
        Self {
            ctx,
            basis: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            accepted: Vec::new(),
            residual: target,
            weights: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.residual.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_solved(&self) -> bool {
        self.residual.iter().all(|x| x.is_zero())
    }

    /// Feeds column `id`; returns whether the target is now in the span.
    pub fn push(&mut self, id: usize, mut column: Vec<FieldElem>) -> bool {
        assert_eq!(column.len(), self.dim(), "column height mismatch");
        if self.is_solved() {
            return true;
        }
        let ctx = self.ctx;
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (b, &pv) in self.basis.iter().zip(&self.pivots) {
            let c = column[pv];
            coeffs.push(c);
            if c.is_zero() {
                continue;
            }
            for (v, &bv) in column.iter_mut().zip(b) {
                *v = ctx.sub(*v, ctx.mul(c, bv));
            }
        }
        let Some(pivot) = column.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(column[pivot]).expect("pivot is nonzero");
        for v in column.iter_mut() {
            *v = ctx.mul(*v, inv);
        }

        // new = (col - sum c_i basis_i) / pivot
        let mut combo = vec![ctx.zero(); self.accepted.len() + 1];
        for (c, prev) in coeffs.iter().zip(&self.combos) {
            if c.is_zero() {
                continue;
            }
            for (slot, &w) in combo.iter_mut().zip(prev) {
                *slot = ctx.sub(*slot, ctx.mul(*c, w));
            }
        }
        for slot in combo.iter_mut() {
            *slot = ctx.mul(*slot, inv);
        }
        combo[self.accepted.len()] = inv;

        let y = self.residual[pivot];
        if !y.is_zero() {
            for (r, &bv) in self.residual.iter_mut().zip(&column) {
                *r = ctx.sub(*r, ctx.mul(y, bv));
            }
        }
        self.weights.push(y);
        self.accepted.push(id);
        self.combos.push(combo);
        self.basis.push(column);
        self.pivots.push(pivot);
        self.is_solved()
    }

    /// Sparse solution `(column id, coefficient)` once solved.
    pub fn solution(&self) -> Option<Vec<(usize, FieldElem)>> {
        if !self.is_solved() {
            return None;
        }
        let ctx = self.ctx;
        let mut x = vec![ctx.zero(); self.accepted.len()];
        for (&w, combo) in self.weights.iter().zip(&self.combos) {
            if w.is_zero() {
                continue;
            }
            for (slot, &c) in x.iter_mut().zip(combo) {
                *slot = ctx.add(*slot, ctx.mul(w, c));
            }
        }
        Some(
            self.accepted
                .iter()
                .copied()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use proptest::prelude::*;

    fn system(ctx: &FieldCtx, ncols: usize, rows: &[(&[u32], u32)]) -> LinearSystem {
        let mut sys = LinearSystem::new(ncols);
        for (row, b) in rows {
            sys.push_row(row.iter().map(|&v| ctx.elem(v)).collect(), ctx.elem(*b))
                .unwrap();
        }
        sys
    }

    #[test]
    fn contradiction_has_no_solution() {
        let f2 = make_field(2, 1).unwrap();
        let sys = system(&f2, 1, &[(&[1], 1), (&[1], 0)]);
        assert_eq!(solve_consistent(&sys, &f2), None);
    }

    #[test]
    fn empty_system_is_vacuous() {
        let f = make_field(13, 1).unwrap();
        let sys = LinearSystem::new(3);
        assert_eq!(solve_consistent(&sys, &f), Some(vec![f.zero(); 3]));
    }

    #[test]
    fn single_equation() {
        let f = make_field(13, 1).unwrap();
        let sys = system(&f, 1, &[(&[2], 1)]);
        assert_eq!(solve_consistent(&sys, &f), Some(vec![f.elem(7)]));
    }

    #[test]
    fn row_width_is_checked() {
        let f = make_field(3, 1).unwrap();
        let mut sys = LinearSystem::new(2);
        assert_eq!(
            sys.push_row(vec![f.one()], f.one()),
            Err(GfError::RowWidth { expected: 2, got: 1 })
        );
    }

    fn brute_force_consistent(ctx: &FieldCtx, sys: &LinearSystem) -> bool {
        let q = ctx.size() as usize;
        let n = sys.ncols();
        let total = q.pow(n as u32);
        (0..total).any(|mut code| {
            let x: Vec<FieldElem> = (0..n)
                .map(|_| {
                    let v = ctx.elem((code % q) as u32);
                    code /= q;
                    v
                })
                .collect();
            sys.is_solution(ctx, &x)
        })
    }

    fn arb_system() -> impl Strategy<Value = (u64, usize, Vec<(Vec<u32>, u32)>)> {
        (prop_oneof![Just(2u64), Just(3u64)], 1usize..=4, 0usize..=5).prop_flat_map(|(p, ncols, nrows)| {
            let row = (proptest::collection::vec(0..p as u32, ncols), 0..p as u32);
            (Just(p), Just(ncols), proptest::collection::vec(row, nrows))
        })
    }

    proptest! {
        #[test]
        fn gauss_agrees_with_enumeration((p, ncols, rows) in arb_system()) {
            let ctx = make_field(p, 1).unwrap();
            let mut sys = LinearSystem::new(ncols);
            for (row, b) in &rows {
                sys.push_row(row.iter().map(|&v| ctx.elem(v)).collect(), ctx.elem(*b)).unwrap();
            }
            let got = solve_consistent(&sys, &ctx);
            prop_assert_eq!(got.is_some(), brute_force_consistent(&ctx, &sys));
            if let Some(x) = got {
                prop_assert!(sys.is_solution(&ctx, &x));
            }
        }

        #[test]
        fn span_solver_agrees_with_gauss((p, ncols, rows) in arb_system()) {
            let ctx = make_field(p, 1).unwrap();
            let mut sys = LinearSystem::new(ncols);
            for (row, b) in &rows {
                sys.push_row(row.iter().map(|&v| ctx.elem(v)).collect(), ctx.elem(*b)).unwrap();
            }
            let target: Vec<FieldElem> = sys.rows().map(|(_, b)| b).collect();
            let mut span = SpanSolver::new(&ctx, target);
            for c in 0..ncols {
                let col = sys.rows().map(|(row, _)| row[c]).collect();
                span.push(c, col);
            }
            let expected = solve_consistent(&sys, &ctx);
            prop_assert_eq!(span.is_solved(), expected.is_some());
            if let Some(sparse) = span.solution() {
                let mut x = vec![ctx.zero(); ncols];
                for (id, c) in sparse {
                    x[id] = c;
                }
                prop_assert!(sys.is_solution(&ctx, &x));
            }
        }
    }
}
