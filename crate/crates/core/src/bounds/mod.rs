//! Lower bounds on `N_r(S_n)` for the three constructions, the sweep that
//! checks computed complexities against them, and the random baseline.
//!
//! All three bounds share one shape. With orbit length `L`, dimension `N`,
//! `M` blocks and a per-variable pole weight `w` (`w = r` for the rational
//! construction, `w = (q^2 - q) r` for the Hermitian ones):
//!
//! ```text
//! (n N - 1) / (N + w)                      for 1 < n <= L
//! (L N floor(n/L) - 1) / (N floor(n/L) + w) for L <= n <= L M
//! ```
//!
//! At `n = L` both branches apply and the larger one is used.

mod baseline;
mod sweep;

use num_rational::Ratio;
use thiserror::Error;

use crate::gf::{is_prime, prime_power};
use crate::multiseq::Provenance;

pub use baseline::{juxtapose, random_baseline, random_multisequence, BaselineStats, ComparisonRow};
pub use sweep::{verify_sweep, SweepOptions, SweepReport, SweepRow};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("bound is for {expected} but the multisequence comes from {found}")]
    ProvenanceMismatch { expected: String, found: String },
    #[error("worker pool: {0}")]
    Pool(String),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, BoundError> {
    Err(BoundError::BadParams(msg.into()))
}

/// Both branches of a bound at one `(n, r)`; a branch is `None` outside its range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub short: Option<Rational>,
    pub blocked: Option<Rational>,
}

impl BoundValue {
    pub fn value(&self) -> Rational {
        match (self.short, self.blocked) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("bounds are built with at least one branch"),
        }
    }

    /// Smallest integer not below the bound.
    pub fn ceil(&self) -> i64 {
        self.value().ceil().to_integer()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Rational function field, orbits of size `d` in `F_q`.
    Rational { q: u64, d: u64 },
    /// Hermitian curve, sigma orbits of size `q^2 - 1`.
    HermitianSigma { q: u64 },
    /// Hermitian curve, phi orbits of size `p`.
    HermitianPhi { p: u64, q: u64 },
}

/// A theorem together with parameters that satisfy its hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundSpec {
    theorem: Theorem,
    n_dim: usize,
    m_blocks: usize,
}

fn check_dims(n_dim: usize, m_blocks: usize, cells: u64, what: &str) -> Result<(), BoundError> {
    if n_dim == 0 || m_blocks == 0 {
        return bad("N >= 1 and M >= 1 required");
    }
    if (n_dim * m_blocks) as u64 != cells {
        return bad(format!(
            "N*M = {what} = {cells} required, got N*M = {}",
            n_dim * m_blocks
        ));
    }
    Ok(())
}

impl BoundSpec {
    pub fn rational(q: u64, d: u64, n_dim: usize, m_blocks: usize) -> Result<Self, BoundError> {
        if prime_power(q).is_none() {
            return bad(format!("q = {q} is not a prime power"));
        }
        if d <= 1 || !(q - 1).is_multiple_of(d) {
            return bad(format!("d > 1 and d | (q-1) required, got d = {d}, q = {q}"));
        }
        if (q - 1) / d < 3 {
            return bad(format!("(q-1)/d >= 3 required, got {}", (q - 1) / d));
        }
        check_dims(n_dim, m_blocks, (q - 1) / d - 1, "(q-1)/d - 1")?;
        Ok(Self {
            theorem: Theorem::Rational { q, d },
            n_dim,
            m_blocks,
        })
    }

    pub fn hermitian_sigma(q: u64, n_dim: usize, m_blocks: usize) -> Result<Self, BoundError> {
        if prime_power(q).is_none() || q < 5 {
            return bad(format!("q >= 5 prime power required, got q = {q}"));
        }
        check_dims(n_dim, m_blocks, q - 1, "q-1")?;
        Ok(Self {
            theorem: Theorem::HermitianSigma { q },
            n_dim,
            m_blocks,
        })
    }

    pub fn hermitian_phi(p: u64, q: u64, n_dim: usize, m_blocks: usize) -> Result<Self, BoundError> {
        if !is_prime(p) || p == 2 {
            return bad(format!("p must be an odd prime, got p = {p}"));
        }
        if prime_power(q).map(|(b, _)| b) != Some(p) {
            return bad(format!("q = {q} is not a power of p = {p}"));
        }
        check_dims(n_dim, m_blocks, q * q * q / p - 1, "q^3/p - 1")?;
        Ok(Self {
            theorem: Theorem::HermitianPhi { p, q },
            n_dim,
            m_blocks,
        })
    }

    /// The bound matching a construction's provenance.
    pub fn for_provenance(prov: &Provenance) -> Result<Self, BoundError> {
        match *prov {
            Provenance::Rational {
                q, d, n_dim, m_blocks, ..
            } => Self::rational(q, d, n_dim, m_blocks),
            Provenance::HermitianSigma { q, n_dim, m_blocks, .. } => Self::hermitian_sigma(q, n_dim, m_blocks),
            Provenance::HermitianPhi {
                p, q, n_dim, m_blocks, ..
            } => Self::hermitian_phi(p, q, n_dim, m_blocks),
            Provenance::External { ref label } => bad(format!("no bound applies to external data ({label})")),
        }
    }

    pub fn theorem(&self) -> Theorem {
        self.theorem
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_dim, self.m_blocks)
    }

    pub fn tag(&self) -> &'static str {
        match self.theorem {
            Theorem::Rational { .. } => "rational",
            Theorem::HermitianSigma { .. } => "hermitian-sigma",
            Theorem::HermitianPhi { .. } => "hermitian-phi",
        }
    }

    pub fn q(&self) -> u64 {
        match self.theorem {
            Theorem::Rational { q, .. } | Theorem::HermitianSigma { q } | Theorem::HermitianPhi { q, .. } => q,
        }
    }

    /// Orbit length `L`: `d`, `q^2 - 1` or `p`.
    pub fn orbit_len(&self) -> u64 {
        match self.theorem {
            Theorem::Rational { d, .. } => d,
            Theorem::HermitianSigma { q } => q * q - 1,
            Theorem::HermitianPhi { p, .. } => p,
        }
    }

    /// Largest `n` covered by the bound, `L * M`.
    pub fn max_n(&self) -> usize {
        self.orbit_len() as usize * self.m_blocks
    }

    /// Largest `r` covered by the bound: `q - 1` or `q^2 - 1`.
    pub fn max_r(&self) -> u32 {
        let q = self.q();
        match self.theorem {
            Theorem::Rational { .. } => (q - 1) as u32,
            _ => (q * q - 1) as u32,
        }
    }

    fn pole_weight(&self, r: u32) -> i64 {
        let q = self.q() as i64;
        match self.theorem {
            Theorem::Rational { .. } => r as i64,
            _ => (q * q - q) * r as i64,
        }
    }

    pub fn bound(&self, n: usize, r: u32) -> Result<BoundValue, BoundError> {
        if n <= 1 || n > self.max_n() {
            return bad(format!("n must satisfy 1 < n <= {}, got n = {n}", self.max_n()));
        }
        if r == 0 || r > self.max_r() {
            return bad(format!("r must satisfy 1 <= r <= {}, got r = {r}", self.max_r()));
        }
        let len = self.orbit_len() as i64;
        let big_n = self.n_dim as i64;
        let w = self.pole_weight(r);
        let n = n as i64;
        let short = (n <= len).then(|| Rational::new(n * big_n - 1, big_n + w));
        let blocked = (n >= len).then(|| {
            let blocks = n / len;
            Rational::new(len * big_n * blocks - 1, big_n * blocks + w)
        });
        Ok(BoundValue { short, blocked })
    }

    /// True when `prov` describes a multisequence this bound talks about.
    pub fn matches(&self, prov: &Provenance) -> bool {
        Self::for_provenance(prov).map(|other| other == *self).unwrap_or(false)
    }
}

pub fn bound_thm1(q: u64, d: u64, n_dim: usize, m_blocks: usize, n: usize, r: u32) -> Result<BoundValue, BoundError> {
    BoundSpec::rational(q, d, n_dim, m_blocks)?.bound(n, r)
}

pub fn bound_thm2(q: u64, n_dim: usize, m_blocks: usize, n: usize, r: u32) -> Result<BoundValue, BoundError> {
    BoundSpec::hermitian_sigma(q, n_dim, m_blocks)?.bound(n, r)
}

pub fn bound_thm3(p: u64, q: u64, n_dim: usize, m_blocks: usize, n: usize, r: u32) -> Result<BoundValue, BoundError> {
    BoundSpec::hermitian_phi(p, q, n_dim, m_blocks)?.bound(n, r)
}
