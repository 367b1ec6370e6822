use std::collections::BTreeMap;
use std::sync::Arc;

use crate::gf::{FieldCtx, FieldElem};
use crate::multiseq::{Multisequence, Provenance};

/// A polynomial in `u` variables with degree at most `r` in each variable.
///
/// Coefficients are keyed by exponent vector; absent keys are zero.
/// Evaluation uses `0^0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingPolynomial {
    u: usize,
    r: u32,
    coeffs: BTreeMap<Vec<u32>, FieldElem>,
}

impl GeneratingPolynomial {
    /// Panics if an exponent vector has the wrong arity or exceeds `r`.
    pub fn new(u: usize, r: u32, coeffs: BTreeMap<Vec<u32>, FieldElem>) -> Self {
        for e in coeffs.keys() {
            assert_eq!(e.len(), u, "exponent vector arity");
            assert!(e.iter().all(|&x| x <= r), "exponent exceeds degree cap {r}");
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { u, r, coeffs }
    }

    pub fn constant(u: usize, r: u32, c: FieldElem) -> Self {
        Self::new(u, r, BTreeMap::from([(vec![0; u], c)]))
    }

    pub fn arity(&self) -> usize {
        self.u
    }

    pub fn degree_cap(&self) -> u32 {
        self.r
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, FieldElem> {
        &self.coeffs
    }

    pub fn eval(&self, ctx: &FieldCtx, args: &[FieldElem]) -> FieldElem {
        assert_eq!(args.len(), self.u, "argument count");
        self.coeffs.iter().fold(ctx.zero(), |acc, (e, &c)| {
            let term = e
                .iter()
                .zip(args)
                .fold(c, |t, (&ei, &x)| ctx.mul(t, ctx.pow(x, ei as u64)));
            ctx.add(acc, term)
        })
    }
}

/// Exponent vectors of `{0..=r}^u` in lexicographic order, first variable most significant.
pub fn exponent_vectors(u: usize, r: u32) -> impl Iterator<Item = Vec<u32>> {
    let mut next = Some(vec![0u32; u]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        for pos in (0..u).rev() {
            if succ[pos] < r {
                succ[pos] += 1;
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(cur)
    })
}

/// Extends each seed by `s(j+u) = f(s(j), ..., s(j+u-1))` up to `length` terms.
pub fn replay(ctx: &Arc<FieldCtx>, f: &GeneratingPolynomial, seeds: &[Vec<FieldElem>], length: usize) -> Multisequence {
    let u = f.arity();
    let rows = seeds
        .iter()
        .map(|seed| {
            assert_eq!(seed.len(), u, "seed length must equal the arity");
            let mut row = seed.clone();
            while row.len() < length {
                let next = f.eval(ctx, &row[row.len() - u..]);
                row.push(next);
            }
            row.truncate(length);
            row
        })
        .collect();
    Multisequence::new(ctx.clone(), rows, Provenance::External { label: "replay".into() })
        .expect("replayed rows share a length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn lex_order_of_exponents() {
        let all: Vec<Vec<u32>> = exponent_vectors(2, 1).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(exponent_vectors(3, 2).count(), 27);
        assert_eq!(exponent_vectors(0, 3).collect::<Vec<_>>(), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn replay_affine_map_over_f2() {
        let ctx = Arc::new(make_field(2, 1).unwrap());
        let f = GeneratingPolynomial::new(1, 1, BTreeMap::from([(vec![0], ctx.one()), (vec![1], ctx.one())]));
        let s = replay(&ctx, &f, &[vec![ctx.one()]], 4);
        let got: Vec<u32> = s.row(0).iter().map(|x| x.index()).collect();
        assert_eq!(got, vec![1, 0, 1, 0]);
    }

    #[test]
    fn replay_constant() {
        let ctx = Arc::new(make_field(5, 1).unwrap());
        let f = GeneratingPolynomial::constant(1, 1, ctx.elem(3));
        let s = replay(&ctx, &f, &[vec![ctx.elem(2)]], 3);
        assert_eq!(s.row(0), &[ctx.elem(2), ctx.elem(3), ctx.elem(3)]);
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        let ctx = make_field(3, 1).unwrap();
        let f = GeneratingPolynomial::new(2, 2, BTreeMap::from([(vec![0, 2], ctx.elem(2))]));
        assert_eq!(f.eval(&ctx, &[ctx.zero(), ctx.elem(2)]), ctx.elem(2));
        assert_eq!(f.eval(&ctx, &[ctx.zero(), ctx.zero()]), ctx.zero());
    }
}
