//! Exact arithmetic: rationals, polynomials in `q`, and the field Q(q).

mod qpoly;
mod ratfunc;

pub use num_rational::BigRational;
pub use qpoly::QPolynomial;
pub use ratfunc::RationalFunction;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("cannot parse rational function from {0:?}")]
    Parse(String),
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `|GL(n, q)| = q^(n choose 2) * prod_{i=1..n} (q^i - 1)`, a polynomial of
/// degree `n^2`. `n = 0` gives the empty product 1.
pub fn gl_order(n: usize) -> QPolynomial {
    let mut acc = QPolynomial::monomial(integer(1), n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        acc = &acc * &q_power_minus_one(i);
    }
    acc
}

/// `q^i - 1`.
pub fn q_power_minus_one(i: usize) -> QPolynomial {
    &QPolynomial::monomial(integer(1), i) - &QPolynomial::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts invertible n x n matrices over F_p by enumerating all of them.
    fn brute_force_gl(n: usize, p: u64) -> u64 {
        let cells = n * n;
        let total = p.pow(cells as u32);
        (0..total)
            .filter(|&code| {
                let mut m = vec![vec![0u64; n]; n];
                let mut c = code;
                for cell in 0..cells {
                    m[cell / n][cell % n] = c % p;
                    c /= p;
                }
                full_rank_mod_p(m, p)
            })
            .count() as u64
    }

    fn full_rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> bool {
        let n = m.len();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
                return false;
            };
            m.swap(col, pivot);
            let inv = (1..p).find(|x| x * m[col][col] % p == 1).unwrap();
            for r in col + 1..n {
                let factor = m[r][col] * inv % p;
                for c in col..n {
                    m[r][c] = (m[r][c] + p * p - factor * m[col][c] % p) % p;
                }
            }
        }
        true
    }

    #[test]
    fn gl_order_small_cases() {
        assert_eq!(gl_order(1), QPolynomial::from_ints(&[-1, 1]));
        assert_eq!(gl_order(2), QPolynomial::from_ints(&[0, 1, -1, -1, 1]));
        assert_eq!(gl_order(2).eval(&integer(2)), integer(6));
        assert!(gl_order(0).is_one());
        assert_eq!(gl_order(5).degree(), Some(25));
    }

    #[test]
    fn gl_order_matches_matrix_enumeration() {
        for n in 1..=3 {
            for p in [2u64, 3] {
                let expect = brute_force_gl(n, p);
                assert_eq!(gl_order(n).eval(&integer(p as i64)), integer(expect as i64));
            }
        }
    }
}
