//! F-stable maximal tori of GL_n over the algebraic closure of F_q.
//!
//! Tori are classified by partitions of `n` (their type). The number of
//! tori of type `lambda` is `|GL(n,q)| / (z_lambda prod_i (q^i - 1)^{n_i})`,
//! and every statistic below is computed twice: once as an exact sum over
//! types, and once from the cycle-index generating function
//! `prod_i exp(x_i u^i / ((q^i - 1) i))` together with the two Euler product
//! expansions over `r >= 1` in powers of `1/q`.

mod partition;

pub use partition::{centralizer_order, partitions, Partition};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{gl_order, integer, q_power_minus_one, rational, BigRational, QPolynomial, RationalFunction};
use crate::report::{Params, VerificationReport};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

pub type RfSeries = TruncatedSeries<RationalFunction>;

/// Default largest `n` for the symbolic tori suites.
pub const DEFAULT_N_MAX: usize = 12;

fn rf(n: i64) -> RationalFunction {
    RationalFunction::from_int(n)
}

fn inv_q(k: i64) -> RationalFunction {
    RationalFunction::q_pow(-k)
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn require(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::OutOfRange { what, n, min })
    } else {
        Ok(())
    }
}

/// `|GL(n,q)| / (z_lambda prod_i (q^i - 1)^{n_i})`, which must be a
/// polynomial in `q`.
pub fn torus_type_count(lambda: &Partition) -> Result<RationalFunction> {
    torus_type_count_with(lambda, &gl_order(lambda.size()))
}

fn torus_type_count_with(lambda: &Partition, gl: &QPolynomial) -> Result<RationalFunction> {
    require("torus_type_count", lambda.size(), 1)?;
    let mut den = QPolynomial::constant(BigRational::from_integer(centralizer_order(lambda)));
    for (i, m) in lambda.multiplicities() {
        den = &den * &q_power_minus_one(i).pow(m as u32);
    }
    let count = RationalFunction::new(gl.clone(), den)?;
    if !count.is_polynomial() {
        return Err(Error::NonPolynomial(lambda.to_string()));
    }
    Ok(count)
}

/// `q^(n choose 2) / n * (q - 1)(q^2 - 1)...(q^(n-1) - 1)`, the number of
/// tori of the one-part type `(n)`.
pub fn irreducible_tori_count(n: usize) -> Result<RationalFunction> {
    require("irreducible_tori_count", n, 1)?;
    let mut acc = QPolynomial::monomial(rational(1, n as i64), binom2(n));
    for i in 1..n {
        acc = &acc * &q_power_minus_one(i);
    }
    Ok(acc.into())
}

/// Number of tori as a sum over all types.
pub fn total_tori(n: usize) -> Result<RationalFunction> {
    require("total_tori", n, 1)?;
    let gl = gl_order(n);
    let mut acc = rf(0);
    for lambda in partitions(n) {
        acc = &acc + &torus_type_count_with(&lambda, &gl)?;
    }
    Ok(acc)
}

/// `q^(n^2 - n)`.
pub fn total_tori_closed_form(n: usize) -> RationalFunction {
    RationalFunction::q_pow((n * n - n) as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusTypeRecord {
    pub partition: Partition,
    pub centralizer: BigInt,
    pub count: RationalFunction,
    pub probability: RationalFunction,
}

/// Every type of `n` with its torus count and its probability under the
/// uniform distribution on tori, in partition order.
pub fn type_distribution(n: usize) -> Result<Vec<TorusTypeRecord>> {
    require("type_distribution", n, 1)?;
    let gl = gl_order(n);
    let total = total_tori_closed_form(n);
    partitions(n)
        .into_iter()
        .map(|lambda| {
            let count = torus_type_count_with(&lambda, &gl)?;
            let probability = count.checked_div(&total)?;
            Ok(TorusTypeRecord {
                centralizer: centralizer_order(&lambda),
                partition: lambda,
                count,
                probability,
            })
        })
        .collect()
}

/// `(1 - 1/q)...(1 - 1/q^n) / (z_lambda prod_i (1 - 1/q^i)^{n_i})`, the type
/// probability written without reference to the total count.
pub fn type_probability_formula(lambda: &Partition) -> Result<RationalFunction> {
    let n = lambda.size();
    require("type_probability_formula", n, 1)?;
    let one = rf(1);
    let mut num = rf(1);
    for i in 1..=n as i64 {
        num = &num * &(&one - &inv_q(i));
    }
    let mut den = RationalFunction::from_rational(BigRational::from_integer(centralizer_order(lambda)));
    for (i, m) in lambda.multiplicities() {
        den = &den * &(&one - &inv_q(i as i64)).pow(m as i32)?;
    }
    Ok(num.checked_div(&den)?)
}

/// Types whose count has a negative coefficient as a polynomial in `q`.
pub fn negative_coefficient_types(n: usize) -> Result<Vec<Partition>> {
    Ok(type_distribution(n)?
        .into_iter()
        .filter(|r| r.count.numerator().coeffs().iter().any(|c| c.is_negative()))
        .map(|r| r.partition)
        .collect())
}

/// `sum_i w_i u^i / ((q^i - 1) i)` for `i = 1..=order`; `weights[i - 1]` is
/// the constant substituted for the mark `x_i`.
fn cycle_index_exponent(order: usize, weights: &[BigRational]) -> Result<RfSeries> {
    if weights.len() < order {
        return Err(Error::Config(format!(
            "cycle index to order {order} needs {order} weights, got {}",
            weights.len()
        )));
    }
    let mut coeffs = vec![rf(0); order + 1];
    for i in 1..=order {
        if weights[i - 1].is_zero() {
            continue;
        }
        let den = q_power_minus_one(i).scale(&integer(i as i64));
        coeffs[i] = RationalFunction::new(QPolynomial::constant(weights[i - 1].clone()), den)?;
    }
    Ok(TruncatedSeries::new(coeffs, order))
}

/// `prod_{i <= order} exp(w_i u^i / ((q^i - 1) i))`.
pub fn cycle_index_series(order: usize, weights: &[BigRational]) -> Result<RfSeries> {
    Ok(cycle_index_exponent(order, weights)?.exp()?)
}

/// `|GL(n,q)|` times the `u^n` coefficient of [`cycle_index_series`]: the
/// sum over tori of `prod_i w_i^{n_i(T)}`.
pub fn cycle_index_coefficient(n: usize, weights: &[BigRational]) -> Result<RationalFunction> {
    let coeff = cycle_index_series(n, weights)?.coefficient(n)?.clone();
    Ok(&coeff * &RationalFunction::from_poly(gl_order(n)))
}

/// The same weighted sum taken directly over types.
pub fn cycle_index_partition_sum(n: usize, weights: &[BigRational]) -> Result<RationalFunction> {
    let gl = gl_order(n);
    let mut acc = rf(0);
    for lambda in partitions(n) {
        let mut w = BigRational::one();
        for (i, m) in lambda.multiplicities() {
            let wi = weights.get(i - 1).ok_or_else(|| {
                Error::Config(format!("no weight for part size {i}"))
            })?;
            w *= num_traits::pow(wi.clone(), m);
        }
        if !w.is_zero() {
            acc = &acc + &torus_type_count_with(&lambda, &gl)?.scale(&w);
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerIdentity {
    /// `prod_{r>=1} 1/(1 - u/q^r) = 1 + sum u^n / (q^n (1-1/q)...(1-1/q^n))`
    Inverse,
    /// `prod_{r>=1} (1 + u/q^r) = 1 + sum u^n / (q^(n+1 choose 2) (1-1/q)...(1-1/q^n))`
    Direct,
}

impl EulerIdentity {
    pub fn number(self) -> u8 {
        match self {
            EulerIdentity::Inverse => 1,
            EulerIdentity::Direct => 2,
        }
    }

    pub fn from_number(which: u8) -> Option<Self> {
        match which {
            1 => Some(EulerIdentity::Inverse),
            2 => Some(EulerIdentity::Direct),
            _ => None,
        }
    }
}

/// The sum side of an Euler identity, truncated at `u^order`.
pub fn euler_sum_series(which: EulerIdentity, order: usize) -> RfSeries {
    let one = rf(1);
    let mut pochhammer = rf(1);
    let mut coeffs = vec![rf(1)];
    for n in 1..=order as i64 {
        pochhammer = &pochhammer * &(&one - &inv_q(n));
        let q_exp = match which {
            EulerIdentity::Inverse => n,
            EulerIdentity::Direct => n * (n + 1) / 2,
        };
        let den = &RationalFunction::q_pow(q_exp) * &pochhammer;
        coeffs.push(den.recip().expect("nonzero"));
    }
    TruncatedSeries::new(coeffs, order)
}

/// Checks the functional equation that pins down each infinite product over
/// `r`, coefficientwise through `u^order`:
/// `F(u) = F(u/q) / (1 - u/q)` for the first identity and
/// `G(u) = (1 + u/q) G(u/q)` for the second.
pub fn euler_identity_check(which: EulerIdentity, order: usize) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let sum = euler_sum_series(which, order);
    let shifted = sum.substitute(&inv_q(1), 1);
    let rhs = match which {
        EulerIdentity::Inverse => {
            shifted.div(&TruncatedSeries::new(vec![rf(1), -inv_q(1)], order))?
        }
        EulerIdentity::Direct => shifted.mul(&TruncatedSeries::new(vec![rf(1), inv_q(1)], order)),
    };
    let name = match which {
        EulerIdentity::Inverse => "euler-identity-1",
        EulerIdentity::Direct => "euler-identity-2",
    };
    Ok(VerificationReport::compare(name, Params::new().with("order", order), &sum, &rhs).timed(start))
}

/// Sum over types of `probability * f(lambda)`.
fn expectation(n: usize, stat: impl Fn(&Partition) -> i64) -> Result<RationalFunction> {
    let mut acc = rf(0);
    for r in type_distribution(n)? {
        let v = stat(&r.partition);
        if v != 0 {
            acc = &acc + &r.probability.scale(&integer(v));
        }
    }
    Ok(acc)
}

/// `|GL(n,q)| / q^(n^2-n)` times the `u^n` coefficient of
/// `prefactor * u^shift * F(u)`, with `F` the first Euler sum.
fn series_moment(n: usize, prefactor: RationalFunction, shift: usize) -> Result<RationalFunction> {
    let f = euler_sum_series(EulerIdentity::Inverse, n);
    let marked = RfSeries::monomial(prefactor, shift, n).mul(&f);
    let coeff = marked.coefficient(n)?;
    let scale = RationalFunction::from_poly(gl_order(n)).checked_div(&total_tori_closed_form(n))?;
    Ok(coeff * &scale)
}

/// `1 + 1/q + ... + 1/q^(n-1)`: expected number of fixed lines, which is
/// the expected number of parts of size 1.
pub fn expected_eigenvectors(n: usize) -> Result<RationalFunction> {
    require("expected_eigenvectors", n, 1)?;
    Ok((0..n as i64).fold(rf(0), |acc, i| &acc + &inv_q(i)))
}

pub fn expected_eigenvectors_partition_sum(n: usize) -> Result<RationalFunction> {
    require("expected_eigenvectors", n, 1)?;
    expectation(n, |l| l.multiplicity(1) as i64)
}

/// From `(u / (q - 1)) F(u)`.
pub fn expected_eigenvectors_series(n: usize) -> Result<RationalFunction> {
    require("expected_eigenvectors", n, 1)?;
    let pre = rf(1).checked_div(&RationalFunction::from_poly(q_power_minus_one(1)))?;
    series_moment(n, pre, 1)
}

/// `(1 - 1/q^(n-1)) (1 - 1/q^n)`.
fn tail_factor(n: usize) -> RationalFunction {
    let one = rf(1);
    &(&one - &inv_q(n as i64 - 1)) * &(&one - &inv_q(n as i64))
}

/// `E[C(n_1, 2)] = q^2 (1 - 1/q^(n-1)) (1 - 1/q^n) / (2 (q - 1)^2)`.
pub fn expected_linear_pairs(n: usize) -> Result<RationalFunction> {
    require("expected_linear_pairs", n, 2)?;
    let qm1 = RationalFunction::from_poly(q_power_minus_one(1));
    let den = (&qm1 * &qm1).scale(&integer(2));
    Ok((&RationalFunction::q_pow(2) * &tail_factor(n)).checked_div(&den)?)
}

pub fn expected_linear_pairs_partition_sum(n: usize) -> Result<RationalFunction> {
    require("expected_linear_pairs", n, 2)?;
    expectation(n, |l| {
        let m = l.multiplicity(1) as i64;
        m * (m - 1) / 2
    })
}

/// Half the second factorial moment read off `(u^2 / (q - 1)^2) F(u)`.
pub fn expected_linear_pairs_series(n: usize) -> Result<RationalFunction> {
    require("expected_linear_pairs", n, 2)?;
    let qm1 = RationalFunction::from_poly(q_power_minus_one(1));
    let pre = rf(1).checked_div(&(&qm1 * &qm1))?;
    Ok(series_moment(n, pre, 2)?.scale(&rational(1, 2)))
}

/// `E[n_2] = q^2 (1 - 1/q^(n-1)) (1 - 1/q^n) / (2 (q^2 - 1))`.
pub fn expected_quadratic_subtori(n: usize) -> Result<RationalFunction> {
    require("expected_quadratic_subtori", n, 2)?;
    let den = RationalFunction::from_poly(q_power_minus_one(2)).scale(&integer(2));
    Ok((&RationalFunction::q_pow(2) * &tail_factor(n)).checked_div(&den)?)
}

pub fn expected_quadratic_subtori_partition_sum(n: usize) -> Result<RationalFunction> {
    require("expected_quadratic_subtori", n, 2)?;
    expectation(n, |l| l.multiplicity(2) as i64)
}

/// From `(u^2 / (2 (q^2 - 1))) F(u)`.
pub fn expected_quadratic_subtori_series(n: usize) -> Result<RationalFunction> {
    require("expected_quadratic_subtori", n, 2)?;
    let den = RationalFunction::from_poly(q_power_minus_one(2)).scale(&integer(2));
    series_moment(n, rf(1).checked_div(&den)?, 2)
}

/// Expected number of reducible minus irreducible dimension-two subtori,
/// `(1/q) (1 - 1/q^(n-1)) (1 - 1/q^n) / ((1 - 1/q)(1 - 1/q^2))`.
pub fn tori_quad_excess(n: usize) -> Result<RationalFunction> {
    require("tori_quad_excess", n, 2)?;
    let one = rf(1);
    let den = &(&one - &inv_q(1)) * &(&one - &inv_q(2));
    Ok((&inv_q(1) * &tail_factor(n)).checked_div(&den)?)
}

/// `E[C(n_1, 2) - n_2]` as a sum over types.
pub fn tori_quad_excess_partition_sum(n: usize) -> Result<RationalFunction> {
    require("tori_quad_excess", n, 2)?;
    expectation(n, |l| {
        let m = l.multiplicity(1) as i64;
        m * (m - 1) / 2 - l.multiplicity(2) as i64
    })
}

/// The `n -> infinity` limit `(1/q) / ((1 - 1/q)(1 - 1/q^2))`.
pub fn tori_quad_excess_limit() -> RationalFunction {
    let one = rf(1);
    let den = &(&one - &inv_q(1)) * &(&one - &inv_q(2));
    inv_q(1).checked_div(&den).expect("nonzero")
}

/// Tori whose number of irreducible factors is congruent to `n` mod 2 minus
/// the rest, as a sum over types.
pub fn mod2_bias(n: usize) -> Result<RationalFunction> {
    require("mod2_bias", n, 1)?;
    let gl = gl_order(n);
    let mut acc = rf(0);
    for lambda in partitions(n) {
        let count = torus_type_count_with(&lambda, &gl)?;
        acc = if (n - lambda.length()).is_multiple_of(2) {
            &acc + &count
        } else {
            &acc - &count
        };
    }
    Ok(acc)
}

/// `q^((n^2 - n) / 2)`.
pub fn mod2_bias_closed_form(n: usize) -> RationalFunction {
    RationalFunction::q_pow(binom2(n) as i64)
}

/// The cycle index with every mark set to `-1` and `u -> -u`:
/// `(-1)^n` times [`cycle_index_coefficient`] with weights `-1`.
pub fn mod2_bias_series(n: usize) -> Result<RationalFunction> {
    require("mod2_bias", n, 1)?;
    let weights = vec![integer(-1); n];
    let v = cycle_index_coefficient(n, &weights)?;
    Ok(if n.is_multiple_of(2) { v } else { -v })
}

/// `|GL(n,q)|` times the `u^n` coefficient of the second Euler sum.
pub fn mod2_bias_euler(n: usize) -> Result<RationalFunction> {
    require("mod2_bias", n, 1)?;
    let g = euler_sum_series(EulerIdentity::Direct, n);
    Ok(g.coefficient(n)? * &RationalFunction::from_poly(gl_order(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn poly(c: &[i64]) -> RationalFunction {
        QPolynomial::from_ints(c).into()
    }

    #[test]
    fn type_counts_n2() {
        let split = torus_type_count(&part(&[1, 1])).unwrap();
        assert_eq!(split, poly(&[0, 1, 1]).scale(&rational(1, 2)));
        assert_eq!(split.eval_int(2).unwrap(), integer(3));
        let irr = torus_type_count(&part(&[2])).unwrap();
        assert_eq!(irr, poly(&[0, -1, 1]).scale(&rational(1, 2)));
        assert_eq!(irr.eval_int(2).unwrap(), integer(1));
        assert_eq!(total_tori(2).unwrap().eval_int(2).unwrap(), integer(4));
    }

    #[test]
    fn irreducible_tori_examples() {
        assert_eq!(irreducible_tori_count(1).unwrap(), rf(1));
        assert_eq!(irreducible_tori_count(2).unwrap(), torus_type_count(&part(&[2])).unwrap());
        assert_eq!(irreducible_tori_count(3).unwrap().eval_int(2).unwrap(), integer(8));
        for n in 1..=8 {
            assert_eq!(
                irreducible_tori_count(n).unwrap(),
                torus_type_count(&part(&[n])).unwrap()
            );
        }
    }

    #[test]
    fn totals() {
        assert_eq!(total_tori(1).unwrap(), rf(1));
        assert_eq!(total_tori(2).unwrap(), RationalFunction::q_pow(2));
        assert_eq!(total_tori(5).unwrap(), RationalFunction::q_pow(20));
        assert!(total_tori(0).is_err());
    }

    #[test]
    fn distribution_examples() {
        let d = type_distribution(2).unwrap();
        assert_eq!(d[0].partition, part(&[2]));
        assert_eq!(d[1].probability.eval_int(2).unwrap(), rational(3, 4));
        let sum = d.iter().fold(rf(0), |acc, r| &acc + &r.probability);
        assert!(sum.is_one());
        let d3 = type_distribution(3).unwrap();
        assert_eq!(d3[0].probability.eval_int(2).unwrap(), rational(1, 8));
        for r in d3 {
            assert_eq!(r.probability, type_probability_formula(&r.partition).unwrap());
        }
    }

    #[test]
    fn counts_can_have_negative_coefficients() {
        assert_eq!(negative_coefficient_types(2).unwrap(), vec![part(&[2])]);
    }

    #[test]
    fn cycle_index_examples() {
        let ones = vec![integer(1); 3];
        assert_eq!(cycle_index_coefficient(3, &ones).unwrap(), RationalFunction::q_pow(6));
        let zeros = vec![integer(0); 4];
        assert!(cycle_index_coefficient(4, &zeros).unwrap().is_zero());
        let mixed = vec![integer(2), rational(-1, 3), integer(5), integer(0)];
        assert_eq!(
            cycle_index_coefficient(4, &mixed).unwrap(),
            cycle_index_partition_sum(4, &mixed).unwrap()
        );
        assert!(cycle_index_coefficient(3, &ones[..2]).is_err());
    }

    #[test]
    fn euler_identities() {
        for which in [EulerIdentity::Inverse, EulerIdentity::Direct] {
            let r = euler_identity_check(which, 8).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let f = euler_sum_series(EulerIdentity::Inverse, 1);
        assert_eq!(
            f.coefficient(1).unwrap(),
            &rf(1).checked_div(&poly(&[-1, 1])).unwrap()
        );
    }

    /// A perturbed sum side must fail the functional equation.
    #[test]
    fn euler_check_detects_wrong_coefficients() {
        let sum = euler_sum_series(EulerIdentity::Inverse, 4);
        let mut coeffs = sum.coeffs().to_vec();
        coeffs[3] = &coeffs[3] + &inv_q(7);
        let bad = TruncatedSeries::new(coeffs, 4);
        let rhs = bad
            .substitute(&inv_q(1), 1)
            .div(&TruncatedSeries::new(vec![rf(1), -inv_q(1)], 4))
            .unwrap();
        assert_ne!(bad, rhs);
    }

    #[test]
    fn eigenvector_examples() {
        let two = expected_eigenvectors(2).unwrap();
        assert_eq!(two.eval_int(2).unwrap(), rational(3, 2));
        assert_eq!(expected_eigenvectors(1).unwrap(), rf(1));
        assert_eq!(
            expected_eigenvectors_partition_sum(3).unwrap().eval_int(2).unwrap(),
            rational(7, 4)
        );
        for n in 1..=6 {
            let closed = expected_eigenvectors(n).unwrap();
            assert_eq!(expected_eigenvectors_partition_sum(n).unwrap(), closed);
            assert_eq!(expected_eigenvectors_series(n).unwrap(), closed);
        }
    }

    #[test]
    fn quad_excess_examples() {
        assert_eq!(tori_quad_excess(2).unwrap(), inv_q(1));
        assert_eq!(tori_quad_excess_partition_sum(2).unwrap().eval_int(2).unwrap(), rational(1, 2));
        assert!(tori_quad_excess(1).is_err());
        for n in 2..=6 {
            let closed = tori_quad_excess(n).unwrap();
            assert_eq!(tori_quad_excess_partition_sum(n).unwrap(), closed);
            assert_eq!(
                &expected_linear_pairs(n).unwrap() - &expected_quadratic_subtori(n).unwrap(),
                closed
            );
            assert_eq!(expected_linear_pairs_series(n).unwrap(), expected_linear_pairs(n).unwrap());
            assert_eq!(
                expected_quadratic_subtori_series(n).unwrap(),
                expected_quadratic_subtori(n).unwrap()
            );
        }
        let coeffs = tori_quad_excess_limit().inverse_q_coefficients(1, 8);
        let expect: Vec<_> = [1, 1, 2, 2, 3, 3, 4, 4].iter().map(|&c| integer(c)).collect();
        assert_eq!(coeffs, expect);
    }

    #[test]
    fn bias_examples() {
        assert_eq!(mod2_bias(2).unwrap().eval_int(2).unwrap(), integer(2));
        assert_eq!(mod2_bias(1).unwrap(), rf(1));
        assert_eq!(mod2_bias(4).unwrap(), RationalFunction::q_pow(6));
        for n in 1..=6 {
            let closed = mod2_bias_closed_form(n);
            assert_eq!(mod2_bias(n).unwrap(), closed);
            assert_eq!(mod2_bias_series(n).unwrap(), closed);
            assert_eq!(mod2_bias_euler(n).unwrap(), closed);
        }
    }
}
