//! Table-driven arithmetic in small finite fields `F_{p^k}`.
//!
//! Elements are stored by their canonical index: the polynomial
//! representative `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` modulo the defining
//! polynomial is encoded as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! For prime fields the index is the residue itself. Multiplication,
//! inversion and powering go through exp/log tables; addition uses a Zech
//! logarithm table, so every operation is a constant number of lookups.

use std::fmt;

use num_integer::Integer;

use super::GfError;

/// Largest field size the table representation supports.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

const NO_LOG: u32 = u32::MAX;

/// An element of a [`FieldCtx`], identified by its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field with its arithmetic tables.
///
/// Immutable after construction; share it behind an `Arc` across workers.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `c_0..c_k` of the monic defining polynomial, low degree first.
    modulus: Vec<u32>,
    primitive: FieldElem,
    /// `exp[i] = primitive^i`, stored twice over so sums of two logs index directly.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[n] = log(1 + primitive^n)`, or `NO_LOG` when that sum is zero.
    zech: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Slow polynomial arithmetic over `F_p`, used only while building tables.
struct PolyArith {
    p: u32,
    k: usize,
    modulus: Vec<u32>,
}

impl PolyArith {
    fn decode(&self, mut idx: u32) -> Vec<u32> {
        let mut digits = vec![0; self.k];
        for d in digits.iter_mut() {
            *d = idx % self.p;
            idx /= self.p;
        }
        digits
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.decode(a), self.decode(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce with the monic modulus, high degree first
        for deg in (self.k..2 * self.k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..self.k {
                let sub = c * self.modulus[i] as u64 % p;
                let slot = &mut prod[deg - self.k + i];
                *slot = (*slot + p - sub) % p;
            }
        }
        let digits: Vec<u32> = prod[..self.k].iter().map(|&c| c as u32).collect();
        self.encode(&digits)
    }

    fn pow(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

/// Remainder of `f` modulo the monic `g` over `F_p`; coefficients low degree first.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    for deg in (dg..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            let slot = &mut r[deg - dg + i];
            *slot = (*slot + p - c * gc as u64 % p) % p;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p` digits of `idx`.
fn monic_from_index(mut idx: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        coeffs.push((idx % p as u64) as u32);
        idx /= p as u64;
    }
    coeffs.push(1);
    coeffs
}

/// True when the monic `f` has no monic factor of degree `1..=deg(f)/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for dg in 1..=k / 2 {
        let count = (p as u64).pow(dg as u32);
        for idx in 0..count {
            let g = monic_from_index(idx, dg, p);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Builds `F_{p^k}` with the lexicographically smallest monic irreducible
/// modulus and the smallest (by canonical index) primitive element.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx, GfError> {
    if !is_prime(p) {
        return Err(GfError::NonPrime(p));
    }
    if k == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= MAX_FIELD_SIZE)
        .ok_or(GfError::FieldTooLarge(p.saturating_pow(k)))?;
    let p32 = p as u32;
    let ku = k as usize;

    let modulus = (0..q)
        .map(|idx| monic_from_index(idx, ku, p32))
        .find(|f| is_irreducible(f, p32))
        .expect("an irreducible polynomial exists in every degree");

    let arith = PolyArith {
        p: p32,
        k: ku,
        modulus: modulus.clone(),
    };
    let order = q - 1;
    let factors = prime_factors(order);
    let primitive = (1..q as u32)
        .find(|&g| factors.iter().all(|&l| arith.pow(g, order / l) != 1))
        .expect("the multiplicative group of a finite field is cyclic");

    let q1 = order as usize;
    let mut exp = vec![0u32; 2 * q1.max(1)];
    let mut log = vec![NO_LOG; q as usize];
    let mut cur = 1u32;
    for (i, slot) in exp[..q1].iter_mut().enumerate() {
        *slot = cur;
        log[cur as usize] = i as u32;
        cur = arith.mul(cur, primitive);
    }
    exp.copy_within(..q1, q1);
    let zech = (0..q1)
        .map(|n| {
            let s = arith.add(1, exp[n]);
            if s == 0 {
                NO_LOG
            } else {
                log[s as usize]
            }
        })
        .collect();

    Ok(FieldCtx {
        p: p32,
        k,
        q: q as u32,
        modulus,
        primitive: FieldElem(primitive),
        exp,
        log,
        zech,
    })
}

impl FieldCtx {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Number of elements `q`.
    pub fn size(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn group_order(&self) -> u32 {
        self.q - 1
    }

    /// Defining polynomial, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> FieldElem {
        self.primitive
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn try_elem(&self, index: u32) -> Option<FieldElem> {
        (index < self.q).then_some(FieldElem(index))
    }

    /// Element with the given canonical index.
    ///
    /// Panics if `index >= q`.
    pub fn elem(&self, index: u32) -> FieldElem {
        self.try_elem(index)
            .unwrap_or_else(|| panic!("index {index} out of range for F_{}", self.q))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }

    /// `primitive^i`, with `i` taken modulo `q - 1`.
    #[inline]
    pub fn exp(&self, i: u64) -> FieldElem {
        FieldElem(self.exp[(i % self.group_order() as u64) as usize])
    }

    /// Discrete logarithm to the primitive base; `None` for zero.
    #[inline]
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        let l = self.log[x.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    /// Base-`p` digits of the polynomial representative, low degree first.
    pub fn coefficients(&self, x: FieldElem) -> Vec<u32> {
        let mut idx = x.0;
        (0..self.k)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let q1 = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let diff = if lb >= la { lb - la } else { lb + q1 - la };
        match self.zech[diff as usize] {
            NO_LOG => FieldElem::ZERO,
            z => FieldElem(self.exp[(la + z) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        // -1 = primitive^((q-1)/2) in odd characteristic
        let l = self.log[a.0 as usize] + (self.q - 1) / 2;
        FieldElem(self.exp[l as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let l = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[l as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, GfError> {
        match self.log(a) {
            None => Err(GfError::DivisionByZero),
            Some(0) => Ok(FieldElem::ONE),
            Some(l) => Ok(FieldElem(self.exp[(self.q - 1 - l) as usize])),
        }
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^e` for a non-negative exponent, with `0^0 = 1`.
    #[inline]
    pub fn pow(&self, x: FieldElem, e: u64) -> FieldElem {
        if x.0 == 0 {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let q1 = (self.q - 1) as u64;
        let l = self.log[x.0 as usize] as u64 * (e % q1) % q1;
        FieldElem(self.exp[l as usize])
    }

    /// `x^e` for any integer exponent; negative powers of zero fail.
    pub fn powi(&self, x: FieldElem, e: i64) -> Result<FieldElem, GfError> {
        if e >= 0 {
            Ok(self.pow(x, e as u64))
        } else {
            Ok(self.pow(self.inv(x)?, e.unsigned_abs()))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElem) -> Result<u64, GfError> {
        let l = self.log(x).ok_or(GfError::ZeroElement)? as u64;
        let q1 = self.group_order() as u64;
        Ok(q1 / l.gcd(&q1))
    }

    /// The generator `primitive^((q-1)/d)` of the order-`d` subgroup.
    pub fn subgroup_generator(&self, d: u64) -> Result<FieldElem, GfError> {
        let q1 = self.group_order() as u64;
        if d == 0 || !q1.is_multiple_of(d) {
            return Err(GfError::NotADivisor { d, order: q1 });
        }
        Ok(self.exp(q1 / d))
    }

    /// Cosets of the order-`d` subgroup in `F_q^*`.
    ///
    /// Cosets are sorted by their minimal member; each lists `rep * alpha^j`
    /// for `j = 0..d` where `rep` is that minimal member and `alpha` is
    /// [`Self::subgroup_generator`].
    pub fn subgroup_cosets(&self, d: u64) -> Result<Vec<Vec<FieldElem>>, GfError> {
        let alpha = self.subgroup_generator(d)?;
        let mut seen = vec![false; self.q as usize];
        let mut cosets = Vec::with_capacity((self.group_order() as u64 / d) as usize);
        for rep in self.nonzero_elements() {
            if seen[rep.0 as usize] {
                continue;
            }
            let mut coset = Vec::with_capacity(d as usize);
            let mut cur = rep;
            for _ in 0..d {
                seen[cur.0 as usize] = true;
                coset.push(cur);
                cur = self.mul(cur, alpha);
            }
            cosets.push(coset);
        }
        Ok(cosets)
    }
}
