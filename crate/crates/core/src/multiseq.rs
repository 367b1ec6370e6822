use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("a multisequence needs at least one row")]
    Empty,
    #[error("row {row} has length {got}, expected {expected}")]
    RaggedRows { row: usize, expected: usize, got: usize },
    #[error("entry {value} in row {row} is outside F_{q}")]
    OutOfField { row: usize, value: u32, q: u32 },
}

/// Which construction produced a multisequence, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Orbits of `x -> alpha x` on the rational function field over `F_q`.
    Rational {
        q: u64,
        d: u64,
        n_dim: usize,
        m_blocks: usize,
        alpha: FieldElem,
        /// Row-major per-orbit starting offsets, when not all zero.
        rotate: Option<Vec<usize>>,
    },
    /// Orbits of `sigma = phi_{delta,0,0}` on the Hermitian curve over `F_{q^2}`.
    HermitianSigma {
        q: u64,
        delta: FieldElem,
        n_dim: usize,
        m_blocks: usize,
        /// False when the parameters fall outside the lower-bound hypotheses.
        guaranteed: bool,
    },
    /// Orbits of `phi = phi_{1,0,theta}` on the Hermitian curve over `F_{q^2}`.
    HermitianPhi {
        q: u64,
        p: u64,
        theta: FieldElem,
        n_dim: usize,
        m_blocks: usize,
        guaranteed: bool,
    },
    /// Anything else: user-supplied files, replayed witnesses, random samples.
    External { label: String },
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Rational { .. } => "rational",
            Provenance::HermitianSigma { .. } => "hermitian-sigma",
            Provenance::HermitianPhi { .. } => "hermitian-phi",
            Provenance::External { .. } => "external",
        }
    }

    /// Construction parameter `q` (field size for the rational construction,
    /// base parameter for the Hermitian ones).
    pub fn q(&self) -> Option<u64> {
        match *self {
            Provenance::Rational { q, .. }
            | Provenance::HermitianSigma { q, .. }
            | Provenance::HermitianPhi { q, .. } => Some(q),
            Provenance::External { .. } => None,
        }
    }

    /// Orbit-size parameter reported in sweep reports: `d`, `q^2 - 1` or `p`.
    pub fn d_or_p(&self) -> Option<u64> {
        match *self {
            Provenance::Rational { d, .. } => Some(d),
            Provenance::HermitianSigma { q, .. } => Some(q * q - 1),
            Provenance::HermitianPhi { p, .. } => Some(p),
            Provenance::External { .. } => None,
        }
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        match *self {
            Provenance::Rational { n_dim, m_blocks, .. }
            | Provenance::HermitianSigma { n_dim, m_blocks, .. }
            | Provenance::HermitianPhi { n_dim, m_blocks, .. } => Some((n_dim, m_blocks)),
            Provenance::External { .. } => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::External { label } => write!(f, "external({label})"),
            other => {
                let (n, m) = other.dims().unwrap_or_default();
                write!(f, "{}(q={}, N={n}, M={m})", other.tag(), other.q().unwrap_or_default())
            }
        }
    }
}

/// `N` sequences of equal length over a common field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multisequence {
    ctx: Arc<FieldCtx>,
    rows: Vec<Vec<FieldElem>>,
    provenance: Provenance,
}

impl Multisequence {
    pub fn new(ctx: Arc<FieldCtx>, rows: Vec<Vec<FieldElem>>, provenance: Provenance) -> Result<Self, SequenceError> {
        let len = rows.first().ok_or(SequenceError::Empty)?.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(SequenceError::RaggedRows {
                    row: i,
                    expected: len,
                    got: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|x| x.index() >= ctx.size()) {
                return Err(SequenceError::OutOfField {
                    row: i,
                    value: bad.index(),
                    q: ctx.size(),
                });
            }
        }
        Ok(Self { ctx, rows, provenance })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.rows[i]
    }

    /// Number of sequences.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Common sequence length.
    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// True when all `n`-prefixes are zero.
    pub fn prefix_is_zero(&self, n: usize) -> bool {
        self.rows.iter().all(|row| row[..n].iter().all(|x| x.is_zero()))
    }

    pub fn into_rows(self) -> Vec<Vec<FieldElem>> {
        self.rows
    }
}
