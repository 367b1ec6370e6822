//! Multisequences from the rational function field `F_q(x)`.
//!
//! The automorphism `x -> alpha x` with `alpha` of order `d` fixes `P_0` and
//! `P_inf` and moves every other rational place in an orbit of size `d`; the
//! orbits are the cosets of `<alpha>` in `F_q^*`. One orbit hosts the pole
//! `P_c` of `z = 1/(x - c)`, the remaining `N*M` orbits are read off along
//! the automorphism to form the `N` sequences.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::multiseq::{Multisequence, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

fn bad(msg: impl Into<String>) -> PlanError {
    PlanError::BadParams(msg.into())
}

#[derive(Clone, Debug)]
pub struct RationalPlan {
    ctx: Arc<FieldCtx>,
    d: u64,
    alpha: FieldElem,
    alpha_inv: FieldElem,
    n_dim: usize,
    m_blocks: usize,
    pole_rep: FieldElem,
    q_grid: Vec<Vec<FieldElem>>,
    rotate: Vec<Vec<usize>>,
}

/// Checks the lower-bound hypotheses and lays out the orbit grid.
///
/// Cosets of `<alpha>` are ordered by minimal member; the first hosts the
/// pole, the rest fill the `N x M` grid row-major, each represented by its
/// minimal member.
pub fn plan_rational(ctx: Arc<FieldCtx>, d: u64, n_dim: usize, m_blocks: usize) -> Result<RationalPlan, PlanError> {
    let q1 = ctx.group_order() as u64;
    if d <= 1 {
        return Err(bad(format!("d > 1 required, got d = {d}")));
    }
    if !q1.is_multiple_of(d) {
        return Err(bad(format!("d | (q-1) required, {d} does not divide {q1}")));
    }
    let orbits = q1 / d;
    if orbits < 3 {
        return Err(bad(format!("(q-1)/d >= 3 required, got (q-1)/d = {orbits}")));
    }
    if n_dim == 0 || m_blocks == 0 {
        return Err(bad("N >= 1 and M >= 1 required"));
    }
    if (n_dim * m_blocks) as u64 != orbits - 1 {
        return Err(bad(format!(
            "N*M = (q-1)/d - 1 required, got N*M = {} but (q-1)/d - 1 = {}",
            n_dim * m_blocks,
            orbits - 1
        )));
    }

    let alpha = ctx.subgroup_generator(d).expect("d divides q-1");
    let alpha_inv = ctx.inv(alpha).expect("alpha is nonzero");
    let cosets = ctx.subgroup_cosets(d).expect("d divides q-1");
    let pole_rep = cosets[0][0];
    let q_grid = cosets[1..]
        .chunks(m_blocks)
        .map(|row| row.iter().map(|coset| coset[0]).collect())
        .collect();

    Ok(RationalPlan {
        ctx,
        d,
        alpha,
        alpha_inv,
        n_dim,
        m_blocks,
        pole_rep,
        q_grid,
        rotate: vec![vec![0; m_blocks]; n_dim],
    })
}

impl RationalPlan {
    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn alpha(&self) -> FieldElem {
        self.alpha
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_dim, self.m_blocks)
    }

    /// x-coordinate `c` of the pole place.
    pub fn pole_rep(&self) -> FieldElem {
        self.pole_rep
    }

    /// x-coordinates of the orbit representatives, `N x M`.
    pub fn q_grid(&self) -> &[Vec<FieldElem>] {
        &self.q_grid
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotate
    }

    /// Starts the traversal of orbit `(i, l)` at its `rotate[i][l]`-th iterate.
    pub fn with_rotation(mut self, rotate: Vec<Vec<usize>>) -> Result<Self, PlanError> {
        if rotate.len() != self.n_dim || rotate.iter().any(|r| r.len() != self.m_blocks) {
            return Err(bad(format!("rotation must be {} x {}", self.n_dim, self.m_blocks)));
        }
        self.rotate = rotate
            .into_iter()
            .map(|r| r.into_iter().map(|j| j % self.d as usize).collect())
            .collect();
        Ok(self)
    }

    /// Replaces the orbit representatives, e.g. to permute grid cells.
    ///
    /// Every entry must be nonzero and all entries plus the pole must lie in
    /// pairwise distinct cosets.
    pub fn with_grid(mut self, q_grid: Vec<Vec<FieldElem>>) -> Result<Self, PlanError> {
        if q_grid.len() != self.n_dim || q_grid.iter().any(|r| r.len() != self.m_blocks) {
            return Err(bad(format!("grid must be {} x {}", self.n_dim, self.m_blocks)));
        }
        let coset_of = |x: FieldElem| {
            self.ctx
                .log(x)
                .map(|l| l as u64 % (self.ctx.group_order() as u64 / self.d))
        };
        let mut seen = vec![coset_of(self.pole_rep).expect("pole is nonzero")];
        for &w in q_grid.iter().flatten() {
            let c = coset_of(w).ok_or_else(|| bad("grid entries must be nonzero"))?;
            if seen.contains(&c) {
                return Err(bad("grid entries and pole must lie in distinct cosets"));
            }
            seen.push(c);
        }
        self.q_grid = q_grid;
        Ok(self)
    }

    fn provenance(&self) -> Provenance {
        let rotated = self.rotate.iter().flatten().any(|&j| j != 0);
        Provenance::Rational {
            q: self.ctx.size() as u64,
            d: self.d,
            n_dim: self.n_dim,
            m_blocks: self.m_blocks,
            alpha: self.alpha,
            rotate: rotated.then(|| self.rotate.iter().flatten().copied().collect()),
        }
    }

    /// x-coordinate of the `j`-th iterate of the place `P_omega`: `omega * alpha^-j`.
    pub fn orbit_point(&self, omega: FieldElem, j: usize) -> FieldElem {
        self.ctx.mul(omega, self.ctx.pow(self.alpha_inv, j as u64))
    }

    /// `z = 1/(x - c)` at the place `P_w`; `w` never lies in the pole's coset.
    pub fn z_at(&self, w: FieldElem) -> FieldElem {
        let den = self.ctx.sub(w, self.pole_rep);
        self.ctx.inv(den).expect("orbit points avoid the pole coset")
    }
}

/// Sequences of length `d * M`, traversing each orbit once.
pub fn generate_rational(plan: &RationalPlan) -> Multisequence {
    generate_rational_laps(plan, 1)
}

/// Like [`generate_rational`] but walks every orbit `laps` times per block.
pub fn generate_rational_laps(plan: &RationalPlan, laps: usize) -> Multisequence {
    let d = plan.d as usize;
    let rows = plan
        .q_grid
        .iter()
        .zip(&plan.rotate)
        .map(|(grid_row, rot_row)| {
            grid_row
                .iter()
                .zip(rot_row)
                .flat_map(|(&omega, &j0)| (0..d * laps).map(move |j| plan.z_at(plan.orbit_point(omega, j0 + j))))
                .collect()
        })
        .collect();
    Multisequence::new(plan.ctx.clone(), rows, plan.provenance()).expect("rows are rectangular")
}
