//! Multisequences from the Hermitian function field `F_{q^2}(x, y)`,
//! `y^q + y = x^{q+1}`.
//!
//! Two cyclic subgroups of the stabilizer of `P_inf` are used:
//! `sigma: x -> delta x, y -> delta^{q+1} y` of order `q^2 - 1`, and
//! `phi: x -> x, y -> y + theta` of order `p`. Sequences are values of
//! `z = (x - a)^q / (y - b - a^q (x - a))` along orbits of affine points;
//! the denominator is the tangent line at `P = (a, b)`, which meets the curve
//! only at `P` (with contact order `q + 1`), so `(z)_inf = (q^2 - q - 1) P_inf + P`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::multiseq::{Multisequence, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermitianError {
    #[error("field has {field} elements, the curve for q = {q} needs q^2")]
    FieldMismatch { field: u32, q: u64 },
    #[error("{0} is not on the curve")]
    PointNotOnCurve(AffinePoint),
    #[error("delta = {0} is not a primitive element")]
    NotPrimitive(FieldElem),
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("theta = {0} must be nonzero with theta^q + theta = 0")]
    BadTheta(FieldElem),
    #[error("z has a pole at the evaluation point")]
    EvalAtPole,
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

/// An affine rational point `(a, b)`; ordered by `(a, b)` canonical indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePoint {
    pub x: FieldElem,
    pub y: FieldElem,
}

impl AffinePoint {
    pub fn new(x: FieldElem, y: FieldElem) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Debug)]
pub struct HermitianCurve {
    ctx: Arc<FieldCtx>,
    q: u64,
    points: Vec<AffinePoint>,
    index: HashMap<AffinePoint, usize>,
}

/// Lists the `q^3` affine points in canonical order.
pub fn enumerate_points(ctx: Arc<FieldCtx>, q: u64) -> Result<HermitianCurve, HermitianError> {
    if ctx.size() as u64 != q * q {
        return Err(HermitianError::FieldMismatch { field: ctx.size(), q });
    }
    let mut by_trace: Vec<Vec<FieldElem>> = vec![Vec::new(); ctx.size() as usize];
    for b in ctx.elements() {
        let t = ctx.add(ctx.pow(b, q), b);
        by_trace[t.index() as usize].push(b);
    }
    let mut points = Vec::new();
    for a in ctx.elements() {
        let norm = ctx.pow(a, q + 1);
        points.extend(by_trace[norm.index() as usize].iter().map(|&b| AffinePoint::new(a, b)));
    }
    let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let curve = HermitianCurve { ctx, q, points, index };
    debug_assert!(curve.points.iter().all(|&p| curve.residual(p).is_zero()));
    Ok(curve)
}

impl HermitianCurve {
    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u64 {
        (self.q * self.q - self.q) / 2
    }

    pub fn affine_points(&self) -> &[AffinePoint] {
        &self.points
    }

    /// Affine points plus `P_inf`.
    pub fn place_count(&self) -> usize {
        self.points.len() + 1
    }

    /// `y^q + y - x^{q+1}` at the point.
    pub fn residual(&self, p: AffinePoint) -> FieldElem {
        let f = &self.ctx;
        let lhs = f.add(f.pow(p.y, self.q), p.y);
        f.sub(lhs, f.pow(p.x, self.q + 1))
    }

    pub fn contains(&self, p: AffinePoint) -> bool {
        self.index.contains_key(&p)
    }

    pub fn point_index(&self, p: AffinePoint) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// Image of an affine point under `aut`, at the level of places.
    pub fn apply(&self, aut: &Automorphism, p: AffinePoint) -> Result<AffinePoint, HermitianError> {
        if !self.contains(p) {
            return Err(HermitianError::PointNotOnCurve(p));
        }
        Ok(aut.apply_unchecked(&self.ctx, p))
    }

    /// Orbits of the cyclic group generated by `aut`, ordered by minimal
    /// member; each orbit starts at that member and follows `aut`.
    pub fn orbits(&self, aut: &Automorphism) -> Vec<Vec<AffinePoint>> {
        let mut seen = vec![false; self.points.len()];
        let mut out = Vec::new();
        for (i, &start) in self.points.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = start;
            loop {
                let idx = self.index[&cur];
                if seen[idx] {
                    break;
                }
                seen[idx] = true;
                orbit.push(cur);
                cur = aut.apply_unchecked(&self.ctx, cur);
            }
            debug_assert_eq!(cur, start, "automorphism orbits are cycles");
            out.push(orbit);
        }
        out
    }
}

/// A generator of one of the two cyclic groups used by the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Automorphism {
    /// `sigma = phi_{delta,0,0}`; maps `P_{a,b}` to `P_{a/delta, b/delta^{q+1}}`.
    Sigma {
        delta: FieldElem,
        x_factor: FieldElem,
        y_factor: FieldElem,
    },
    /// `phi = phi_{1,0,theta}`; maps `P_{a,b}` to `P_{a, b - theta}`.
    Phi { theta: FieldElem, neg_theta: FieldElem },
}

impl Automorphism {
    pub fn sigma(curve: &HermitianCurve, delta: FieldElem) -> Result<Self, HermitianError> {
        let f = curve.field();
        let x_factor = f.inv(delta).map_err(|_| HermitianError::ZeroDelta)?;
        let y_factor = f.pow(x_factor, curve.q() + 1);
        Ok(Automorphism::Sigma {
            delta,
            x_factor,
            y_factor,
        })
    }

    pub fn phi(curve: &HermitianCurve, theta: FieldElem) -> Result<Self, HermitianError> {
        let f = curve.field();
        if theta.is_zero() || !f.add(f.pow(theta, curve.q()), theta).is_zero() {
            return Err(HermitianError::BadTheta(theta));
        }
        Ok(Automorphism::Phi {
            theta,
            neg_theta: f.neg(theta),
        })
    }

    /// The defining parameter, `delta` or `theta`.
    pub fn param(&self) -> FieldElem {
        match *self {
            Automorphism::Sigma { delta, .. } => delta,
            Automorphism::Phi { theta, .. } => theta,
        }
    }

    #[inline]
    fn apply_unchecked(&self, f: &FieldCtx, p: AffinePoint) -> AffinePoint {
        match *self {
            Automorphism::Sigma { x_factor, y_factor, .. } => {
                AffinePoint::new(f.mul(p.x, x_factor), f.mul(p.y, y_factor))
            }
            Automorphism::Phi { neg_theta, .. } => AffinePoint::new(p.x, f.add(p.y, neg_theta)),
        }
    }
}

/// Orbits of `<sigma>` on affine points: sizes `1`, `q - 1`, then `q` of size `q^2 - 1`.
pub fn sigma_orbits(curve: &HermitianCurve, delta: FieldElem) -> Result<Vec<Vec<AffinePoint>>, HermitianError> {
    let f = curve.field();
    if f.element_order(delta).ok() != Some(f.group_order() as u64) {
        return Err(HermitianError::NotPrimitive(delta));
    }
    Ok(curve.orbits(&Automorphism::sigma(curve, delta)?))
}

/// Orbits of `<phi>` on affine points: `q^3 / p` orbits of size `p`.
pub fn phi_orbits(curve: &HermitianCurve, theta: FieldElem) -> Result<Vec<Vec<AffinePoint>>, HermitianError> {
    Ok(curve.orbits(&Automorphism::phi(curve, theta)?))
}

/// First nonzero `theta` in canonical order with `theta^q + theta = 0`.
pub fn canonical_theta(curve: &HermitianCurve) -> FieldElem {
    let f = curve.field();
    f.nonzero_elements()
        .find(|&t| f.add(f.pow(t, curve.q()), t).is_zero())
        .expect("the trace kernel has q - 1 nonzero elements")
}

/// `z = (x - a)^q / (y - b - a^q (x - a))` with pole divisor `(2g - 1) P_inf + P`.
#[derive(Clone, Debug)]
pub struct PoleFunction {
    ctx: Arc<FieldCtx>,
    q: u64,
    pole: AffinePoint,
    slope: FieldElem,
}

impl PoleFunction {
    pub fn new(curve: &HermitianCurve, pole: AffinePoint) -> Result<Self, HermitianError> {
        if !curve.contains(pole) {
            return Err(HermitianError::PointNotOnCurve(pole));
        }
        let ctx = curve.field().clone();
        let slope = ctx.pow(pole.x, curve.q());
        Ok(Self {
            ctx,
            q: curve.q(),
            pole,
            slope,
        })
    }

    pub fn pole(&self) -> AffinePoint {
        self.pole
    }

    /// Tangent line `y - b - a^q (x - a)` at the pole, evaluated at `p`.
    pub fn denominator(&self, p: AffinePoint) -> FieldElem {
        let f = &self.ctx;
        let dx = f.sub(p.x, self.pole.x);
        f.sub(f.sub(p.y, self.pole.y), f.mul(self.slope, dx))
    }

    pub fn numerator(&self, p: AffinePoint) -> FieldElem {
        self.ctx.pow(self.ctx.sub(p.x, self.pole.x), self.q)
    }

    pub fn eval(&self, p: AffinePoint) -> Result<FieldElem, HermitianError> {
        if p == self.pole {
            return Err(HermitianError::EvalAtPole);
        }
        let den = self.denominator(p);
        self.ctx
            .div(self.numerator(p), den)
            .map_err(|_| HermitianError::EvalAtPole)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitianMode {
    Sigma,
    Phi,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HermitianOptions {
    /// Build plans outside the lower-bound hypotheses (small `q` for sigma,
    /// `p = 2` for phi); provenance records the missing guarantee.
    pub allow_unguaranteed: bool,
}

#[derive(Clone, Debug)]
pub struct HermitianPlan {
    curve: Arc<HermitianCurve>,
    mode: HermitianMode,
    aut: Automorphism,
    n_dim: usize,
    m_blocks: usize,
    pole_point: AffinePoint,
    q_grid: Vec<Vec<AffinePoint>>,
    orbit_len: usize,
    guaranteed: bool,
}

pub fn plan_hermitian(
    curve: Arc<HermitianCurve>,
    mode: HermitianMode,
    n_dim: usize,
    m_blocks: usize,
) -> Result<HermitianPlan, HermitianError> {
    plan_hermitian_with(curve, mode, n_dim, m_blocks, HermitianOptions::default())
}

pub fn plan_hermitian_with(
    curve: Arc<HermitianCurve>,
    mode: HermitianMode,
    n_dim: usize,
    m_blocks: usize,
    opts: HermitianOptions,
) -> Result<HermitianPlan, HermitianError> {
    let bad = |m: String| Err(HermitianError::BadParams(m));
    let q = curve.q();
    let p = curve.field().characteristic() as u64;
    if n_dim == 0 || m_blocks == 0 {
        return bad("N >= 1 and M >= 1 required".into());
    }
    let cells = (n_dim * m_blocks) as u64;

    let (aut, eligible, orbit_len, guaranteed) = match mode {
        HermitianMode::Sigma => {
            let guaranteed = q >= 5;
            if !guaranteed && !opts.allow_unguaranteed {
                return bad(format!("sigma construction requires q >= 5, got q = {q}"));
            }
            if cells != q - 1 {
                return bad(format!("N*M = q-1 required, got N*M = {cells}, q-1 = {}", q - 1));
            }
            let delta = curve.field().primitive();
            let full = (q * q - 1) as usize;
            let orbits: Vec<_> = sigma_orbits(&curve, delta)?
                .into_iter()
                .filter(|o| o.len() == full)
                .collect();
            (Automorphism::sigma(&curve, delta)?, orbits, full, guaranteed)
        }
        HermitianMode::Phi => {
            let guaranteed = p % 2 == 1;
            if !guaranteed && !opts.allow_unguaranteed {
                return bad(format!("phi construction requires an odd prime p, got p = {p}"));
            }
            let total = q * q * q / p;
            if cells != total - 1 {
                return bad(format!(
                    "N*M = q^3/p - 1 required, got N*M = {cells}, q^3/p - 1 = {}",
                    total - 1
                ));
            }
            let theta = canonical_theta(&curve);
            (
                Automorphism::phi(&curve, theta)?,
                phi_orbits(&curve, theta)?,
                p as usize,
                guaranteed,
            )
        }
    };

    debug_assert_eq!(eligible.len() as u64, cells + 1);
    let pole_point = eligible[0][0];
    let q_grid = eligible[1..]
        .chunks(m_blocks)
        .map(|row| row.iter().map(|o| o[0]).collect())
        .collect();
    Ok(HermitianPlan {
        curve,
        mode,
        aut,
        n_dim,
        m_blocks,
        pole_point,
        q_grid,
        orbit_len,
        guaranteed,
    })
}

impl HermitianPlan {
    pub fn curve(&self) -> &Arc<HermitianCurve> {
        &self.curve
    }

    pub fn mode(&self) -> HermitianMode {
        self.mode
    }

    pub fn automorphism(&self) -> Automorphism {
        self.aut
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_dim, self.m_blocks)
    }

    pub fn pole_point(&self) -> AffinePoint {
        self.pole_point
    }

    pub fn q_grid(&self) -> &[Vec<AffinePoint>] {
        &self.q_grid
    }

    pub fn orbit_len(&self) -> usize {
        self.orbit_len
    }

    pub fn is_guaranteed(&self) -> bool {
        self.guaranteed
    }

    fn provenance(&self) -> Provenance {
        let q = self.curve.q();
        match self.mode {
            HermitianMode::Sigma => Provenance::HermitianSigma {
                q,
                delta: self.aut.param(),
                n_dim: self.n_dim,
                m_blocks: self.m_blocks,
                guaranteed: self.guaranteed,
            },
            HermitianMode::Phi => Provenance::HermitianPhi {
                q,
                p: self.curve.field().characteristic() as u64,
                theta: self.aut.param(),
                n_dim: self.n_dim,
                m_blocks: self.m_blocks,
                guaranteed: self.guaranteed,
            },
        }
    }
}

/// Sequences of length `M * orbit_len`.
pub fn generate_hermitian(plan: &HermitianPlan) -> Multisequence {
    generate_hermitian_laps(plan, 1)
}

/// Like [`generate_hermitian`] but walks every orbit `laps` times per block.
pub fn generate_hermitian_laps(plan: &HermitianPlan, laps: usize) -> Multisequence {
    let curve = &plan.curve;
    let z = PoleFunction::new(curve, plan.pole_point).expect("pole point lies on the curve");
    let steps = plan.orbit_len * laps;
    let rows = plan
        .q_grid
        .iter()
        .map(|grid_row| {
            let mut row = Vec::with_capacity(steps * plan.m_blocks);
            for &start in grid_row {
                let mut cur = start;
                for _ in 0..steps {
                    row.push(z.eval(cur).expect("grid orbits avoid the pole orbit"));
                    cur = plan.aut.apply_unchecked(curve.field(), cur);
                }
            }
            row
        })
        .collect();
    Multisequence::new(curve.field().clone(), rows, plan.provenance()).expect("rows are rectangular")
}
