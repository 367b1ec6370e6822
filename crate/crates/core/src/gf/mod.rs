//! Finite field arithmetic and linear algebra over `F_q`.

mod field;
mod linalg;

use thiserror::Error;

pub use field::{is_irreducible, is_prime, make_field, prime_power, FieldCtx, FieldElem, MAX_FIELD_SIZE};
pub use linalg::{solve_consistent, LinearSystem, SpanSolver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {0} exceeds the table limit 2^16")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("{d} does not divide q-1 = {order}")]
    NotADivisor { d: u64, order: u64 },
    #[error("row has {got} entries, system has {expected} unknowns")]
    RowWidth { expected: usize, got: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent reference: schoolbook polynomial arithmetic on digit vectors.
    struct Reference {
        p: u32,
        modulus: Vec<u32>,
    }

    impl Reference {
        fn k(&self) -> usize {
            self.modulus.len() - 1
        }

        fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
            a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
        }

        fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
            let k = self.k();
            let mut prod = vec![0u32; 2 * k];
            for i in 0..k {
                for j in 0..k {
                    prod[i + j] = (prod[i + j] + a[i] * b[j]) % self.p;
                }
            }
            while prod.len() > k {
                let top = prod.pop().unwrap();
                let shift = prod.len() - k;
                for i in 0..k {
                    prod[shift + i] = (prod[shift + i] + self.p * self.p - top * self.modulus[i]) % self.p;
                }
            }
            prod
        }
    }

    const SMALL_FIELDS: [(u64, u32); 9] = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2), (7, 2), (13, 1)];

    #[test]
    fn table_arithmetic_matches_reference() {
        for (p, k) in SMALL_FIELDS {
            let f = make_field(p, k).unwrap();
            let r = Reference {
                p: p as u32,
                modulus: f.modulus().to_vec(),
            };
            for a in f.elements() {
                for b in f.elements() {
                    let (da, db) = (f.coefficients(a), f.coefficients(b));
                    assert_eq!(f.coefficients(f.add(a, b)), r.add(&da, &db), "F_{p}^{k}: {a}+{b}");
                    assert_eq!(f.coefficients(f.mul(a, b)), r.mul(&da, &db), "F_{p}^{k}: {a}*{b}");
                    assert_eq!(f.add(f.sub(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn lagrange_and_inverses_exhaustive() {
        for (p, k) in [(2, 10), (3, 6), (5, 4), (31, 2), (1021, 1)] {
            let f = make_field(p, k).unwrap();
            let q1 = f.group_order() as u64;
            for x in f.nonzero_elements() {
                assert_eq!(f.pow(x, q1), f.one());
                assert_eq!(f.mul(f.inv(x).unwrap(), x), f.one());
                assert_eq!(f.add(x, f.neg(x)), f.zero());
            }
        }
    }

    #[test]
    fn exp_log_tables_are_consistent() {
        let f = make_field(3, 4).unwrap();
        let q1 = f.group_order() as u64;
        for i in 0..q1 {
            for j in 0..q1 {
                assert_eq!(f.mul(f.exp(i), f.exp(j)), f.exp((i + j) % q1));
            }
        }
        assert_eq!(f.element_order(f.primitive()).unwrap(), q1);
    }

    #[test]
    fn moduli_are_irreducible() {
        for (p, k) in SMALL_FIELDS.into_iter().chain([(2, 16), (3, 10), (251, 2)]) {
            let f = make_field(p, k).unwrap();
            assert!(is_irreducible(f.modulus(), p as u32));
            assert_eq!(f.modulus().len(), k as usize + 1);
            assert_eq!(*f.modulus().last().unwrap(), 1);
        }
    }

    #[test]
    fn cosets_partition_the_group() {
        let f = make_field(61, 1).unwrap();
        for d in [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60] {
            let cosets = f.subgroup_cosets(d).unwrap();
            assert_eq!(cosets.len() as u64, 60 / d);
            let mut all: Vec<u32> = cosets.iter().flatten().map(|e| e.index()).collect();
            all.sort_unstable();
            assert_eq!(all, (1..61).collect::<Vec<_>>());
            assert!(cosets.windows(2).all(|w| w[0][0] < w[1][0]));
            assert!(cosets.iter().all(|c| c.iter().all(|&x| c[0] <= x)));
        }
    }
}
