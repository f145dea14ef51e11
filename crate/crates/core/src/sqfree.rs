//! Symbolic counts and expectations for square-free monic polynomials over
//! F_q, as exact elements of Q(q).
//!
//! Everything here is read off generating functions in `u` whose
//! coefficients live in Q(q): the Euler products over irreducibles
//! `prod_d (1 +- u^d)^{N(d,q)}` and the already-differentiated closed forms
//! for the factor-count statistics. The mark variable for a statistic is
//! never carried as a second indeterminate.

use crate::arith::{integer, rational, BigRational, QPolynomial, RationalFunction};
use crate::report::{Params, VerificationReport};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

pub type RfSeries = TruncatedSeries<RationalFunction>;

/// Truncation order used by the verification suites.
pub const DEFAULT_ORDER: usize = 24;

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `N(d, q)`, the number of monic irreducible polynomials of degree `d` over
/// F_q, as `(1/d) sum_{e | d} mu(e) q^(d/e)`.
pub fn count_irreducibles(d: usize) -> RationalFunction {
    assert!(d >= 1, "irreducible degree must be positive");
    let mut acc = QPolynomial::zero();
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        let m = mobius(e);
        if m != 0 {
            acc = &acc + &QPolynomial::monomial(integer(m), d / e);
        }
    }
    RationalFunction::from_poly(acc.scale(&rational(1, d as i64)))
}

fn rf(n: i64) -> RationalFunction {
    RationalFunction::from_int(n)
}

fn q() -> RationalFunction {
    RationalFunction::q()
}

/// Series from a list of low-order coefficients.
fn series(coeffs: Vec<RationalFunction>, order: usize) -> RfSeries {
    TruncatedSeries::new(coeffs, order)
}

/// `prod_{d <= order} (1 + sign * u^d)^(exponent * N(d, q))`.
///
/// The product is formed as one exponential of the summed logarithms, which
/// equals the product of the individual `series_pow` factors.
fn irreducible_product(order: usize, sign: i64, exponent: i64) -> Result<RfSeries> {
    let mut log_sum = RfSeries::zero(order);
    for d in 1..=order {
        let factor = series(vec![rf(1)], order).add(&RfSeries::monomial(rf(sign), d, order));
        let weight = count_irreducibles(d).scale(&integer(exponent));
        log_sum = log_sum.add(&factor.log()?.scale(&weight));
    }
    Ok(log_sum.exp()?)
}

/// `prod_{d <= order} (1 - u^d)^(-N(d,q))`.
pub fn factorization_product(order: usize) -> Result<RfSeries> {
    irreducible_product(order, -1, -1)
}

/// `1 / (1 - q u)`.
pub fn monic_polynomial_series(order: usize) -> Result<RfSeries> {
    Ok(series(vec![rf(1), -q()], order).recip()?)
}

/// Compares the product over irreducibles with `1/(1 - qu)` through `u^order`.
pub fn factorization_identity_check(order: usize) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let lhs = factorization_product(order)?;
    let rhs = monic_polynomial_series(order)?;
    Ok(VerificationReport::compare(
        "factorization-product",
        Params::new().with("order", order),
        &lhs,
        &rhs,
    )
    .timed(start))
}

/// `prod_d (1 + u^d)^{N(d,q)}`, whose `u^n` coefficient counts square-free
/// monic polynomials of degree `n`.
pub fn squarefree_series(order: usize) -> Result<RfSeries> {
    irreducible_product(order, 1, 1)
}

/// `(1 - q u^2) / (1 - q u)`.
pub fn squarefree_closed_series(order: usize) -> Result<RfSeries> {
    let num = series(vec![rf(1), rf(0), -q()], order);
    let den = series(vec![rf(1), -q()], order);
    Ok(num.div(&den)?)
}

/// Number of square-free monic degree-`n` polynomials, read off the
/// product over irreducibles.
pub fn squarefree_count(n: usize) -> Result<RationalFunction> {
    Ok(squarefree_series(n)?.coefficient(n)?.clone())
}

/// `q^n - q^(n-1)` for `n >= 2`, `q` for `n = 1`, `1` for `n = 0`.
pub fn squarefree_count_closed_form(n: usize) -> RationalFunction {
    match n {
        0 => rf(1),
        1 => q(),
        _ => &RationalFunction::q_pow(n as i64) - &RationalFunction::q_pow(n as i64 - 1),
    }
}

fn require(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::OutOfRange { what, n, min })
    } else {
        Ok(())
    }
}

/// Expected number of linear factors (equivalently distinct roots in F_q)
/// of a uniform square-free monic polynomial of degree `n >= 2`.
///
/// Computed as the `u^n` coefficient of `(q u / (1 + u)) (1 - q u^2) / (1 - q u)`
/// divided by `q^n - q^(n-1)`.
pub fn expected_linear_factors(n: usize) -> Result<RationalFunction> {
    require("expected_linear_factors", n, 2)?;
    let marked = series(vec![rf(0), q()], n).div(&series(vec![rf(1), rf(1)], n))?;
    let total = marked.mul(&squarefree_closed_series(n)?);
    Ok(total
        .coefficient(n)?
        .checked_div(&squarefree_count_closed_form(n))?)
}

/// `1 - 1/q + 1/q^2 - ... +- 1/q^(n-2)`.
pub fn expected_linear_factors_partial_sum(n: usize) -> Result<RationalFunction> {
    require("expected_linear_factors", n, 2)?;
    let mut acc = rf(0);
    for i in 0..=(n - 2) as i64 {
        let term = RationalFunction::q_pow(-i);
        acc = if i % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

/// `E[n_2]`: expected number of irreducible quadratic factors, from the
/// `u^n` coefficient of `(q^2 u^2 / (2 q^n)) / (1 + u^2) * (1 - q u^2)/(1 - q u)`.
pub fn expected_irreducible_quadratics(n: usize) -> Result<RationalFunction> {
    require("expected_irreducible_quadratics", n, 2)?;
    let inner = RfSeries::monomial(rf(1), 2, n)
        .div(&series(vec![rf(1), rf(0), rf(1)], n))?
        .mul(&squarefree_closed_series(n)?);
    let scale = RationalFunction::q_pow(2 - n as i64).scale(&rational(1, 2));
    Ok(inner.coefficient(n)? * &scale)
}

/// `E[C(n_1, 2)]`, half of the second factorial moment read off
/// `(q^2 u^2 / q^n) / (1 + u)^2 * (1 - q u^2)/(1 - q u)`.
pub fn expected_linear_pairs(n: usize) -> Result<RationalFunction> {
    require("expected_linear_pairs", n, 2)?;
    let one_plus_u = series(vec![rf(1), rf(1)], n);
    let inner = RfSeries::monomial(rf(1), 2, n)
        .div(&one_plus_u.mul(&one_plus_u))?
        .mul(&squarefree_closed_series(n)?);
    let scale = RationalFunction::q_pow(2 - n as i64).scale(&rational(1, 2));
    Ok(inner.coefficient(n)? * &scale)
}

/// The combined generating function
/// `[1/(1 + (u/q)^2) - 1/(1 + u/q)^2] (u^2 / 2) (1 - u^2/q) / (1 - u)`
/// whose `u^n` coefficient is `E[n_2 - C(n_1, 2)]`.
pub fn quad_excess_series(order: usize) -> Result<RfSeries> {
    let inv_q = RationalFunction::q_pow(-1);
    let inv_q2 = RationalFunction::q_pow(-2);
    let one = RfSeries::one(order);
    let irreducible = one.div(&series(vec![rf(1), rf(0), inv_q2.clone()], order))?;
    let linear_base = series(vec![rf(1), inv_q.clone()], order);
    let linear = one.div(&linear_base.mul(&linear_base))?;
    let half_u2 = RfSeries::monomial(RationalFunction::from_rational(rational(1, 2)), 2, order);
    let tail = series(vec![rf(1), rf(0), -&inv_q], order).div(&series(vec![rf(1), rf(-1)], order))?;
    Ok(irreducible.sub(&linear).mul(&half_u2).mul(&tail))
}

/// Expected excess of irreducible quadratic factors over pairs of linear
/// factors, `E[n_2 - C(n_1, 2)]`, for `n >= 2`.
pub fn quad_excess_exact(n: usize) -> Result<RationalFunction> {
    require("quad_excess_exact", n, 2)?;
    Ok(quad_excess_series(n)?.coefficient(n)?.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    A,
    B,
}

/// The integer sequences `a_i` and `b_i` of the finite-n excess formula,
/// indexed from 1.
///
/// They are defined by `sum a_i u^i = u(1+u) / ((1-u)^2 (1+u^2))` and
/// `sum b_i u^i = 1 / ((1-u)^2 (1+u^2)) - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    pub kind: SequenceKind,
    values: Vec<i64>,
}

impl SequenceTable {
    /// Reads `len` terms off the defining generating function.
    pub fn from_generating_function(kind: SequenceKind, len: usize) -> Self {
        let one = TruncatedSeries::<BigRational>::one(len);
        let q_series = |c: &[i64]| {
            TruncatedSeries::<BigRational>::new(c.iter().map(|&x| integer(x)).collect(), len)
        };
        let den = q_series(&[1, -2, 1])
            .mul(&q_series(&[1, 0, 1]));
        let gf = match kind {
            SequenceKind::A => q_series(&[0, 1, 1]).div(&den),
            SequenceKind::B => one.div(&den).map(|s| s.sub(&one)),
        }
        .expect("denominator has constant term 1");
        let values = gf.coeffs()[1..]
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).expect("sequence term fits in i64")
            })
            .collect();
        SequenceTable { kind, values }
    }

    /// A table with explicit values, `values[0]` being term 1.
    pub fn from_values(kind: SequenceKind, values: Vec<i64>) -> Self {
        SequenceTable { kind, values }
    }

    /// Replaces the leading terms with `prefix`.
    pub fn with_prefix(mut self, prefix: &[i64]) -> Self {
        for (slot, &v) in self.values.iter_mut().zip(prefix) {
            *slot = v;
        }
        if prefix.len() > self.values.len() {
            self.values.extend_from_slice(&prefix[self.values.len()..]);
        }
        self
    }

    /// Term `i` (1-based).
    pub fn get(&self, i: usize) -> Option<i64> {
        i.checked_sub(1).and_then(|k| self.values.get(k)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// The finite-n closed formula for `E[n_2 - C(n_1, 2)]`:
/// `0` at `n = 2`, `1/q` at `n = 3`, and for `n >= 4`
/// `sum_{i=1}^{n-3} (-1)^(i+1) a_i / q^i - (-1)^n b_{n-3} / q^(n-2)`.
pub fn quad_excess_formula_with(
    n: usize,
    a: &SequenceTable,
    b: &SequenceTable,
) -> Result<RationalFunction> {
    require("quad_excess_formula", n, 2)?;
    match n {
        2 => return Ok(rf(0)),
        3 => return Ok(RationalFunction::q_pow(-1)),
        _ => {}
    }
    let missing = |kind, i| Error::Config(format!("sequence {kind:?} has no term {i}"));
    let mut acc = rf(0);
    for i in 1..=n - 3 {
        let ai = a.get(i).ok_or_else(|| missing(a.kind, i))?;
        let sign = if i % 2 == 1 { 1 } else { -1 };
        acc = &acc + &RationalFunction::q_pow(-(i as i64)).scale(&integer(sign * ai));
    }
    let b_last = b.get(n - 3).ok_or_else(|| missing(b.kind, n - 3))?;
    let sign = if n.is_multiple_of(2) { -1 } else { 1 };
    acc = &acc + &RationalFunction::q_pow(-(n as i64 - 2)).scale(&integer(sign * b_last));
    Ok(acc)
}

/// [`quad_excess_formula_with`] using tables generated to the needed length.
pub fn quad_excess_formula(n: usize) -> Result<RationalFunction> {
    let len = n.saturating_sub(3).max(1);
    quad_excess_formula_with(
        n,
        &SequenceTable::from_generating_function(SequenceKind::A, len),
        &SequenceTable::from_generating_function(SequenceKind::B, len),
    )
}

/// The `n -> infinity` limit `(1/q)(1 - 1/q) / ((1 + 1/q)^2 (1 + 1/q^2))`.
pub fn quad_excess_limit() -> RationalFunction {
    let inv_q = RationalFunction::q_pow(-1);
    let one = rf(1);
    let num = &inv_q * &(&one - &inv_q);
    let base = &one + &inv_q;
    let den = &(&base * &base) * &(&one + &RationalFunction::q_pow(-2));
    num.checked_div(&den).expect("denominator is nonzero")
}

/// `prod_{d <= order} (1 - u^d)^{N(d,q)}`, the generating function of the
/// signed count `sum mu(P)` over square-free `P`.
pub fn moebius_series(order: usize) -> Result<RfSeries> {
    irreducible_product(order, -1, 1)
}

/// `sum_{P square-free, deg n} (-1)^{#irreducible factors of P}`.
pub fn moebius_signed_sum(n: usize) -> Result<RationalFunction> {
    Ok(moebius_series(n)?.coefficient(n)?.clone())
}

/// The matching coefficient of `1 - q u`.
pub fn moebius_closed_form(n: usize) -> RationalFunction {
    match n {
        0 => rf(1),
        1 => -q(),
        _ => rf(0),
    }
}
