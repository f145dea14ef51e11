//! Truncated formal power series in `u` over a coefficient ring containing Q.
//!
//! A series carries an explicit truncation order `N` and stores the
//! coefficients of `u^0 ..= u^N`. Binary operations truncate to the smaller
//! order. Reading a coefficient past the order is an error rather than an
//! implicit zero, so precision can never be lost silently.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{BigRational, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term {0} is not a unit")]
    NonUnitConstant(String),
    #[error("log needs constant term 1, found {0}")]
    LogConstantTerm(String),
    #[error("exp needs constant term 0, found {0}")]
    ExpConstantTerm(String),
    #[error("coefficient of u^{n} requested but series is only known to order {order}")]
    BeyondOrder { n: usize, order: usize },
}

/// Commutative ring operations a series coefficient needs.
///
/// Both implementors are fields containing Q, which is what `exp`/`log`
/// need for their divisions by integers.
pub trait CoefficientRing: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse, `None` when `self` is not a unit.
    fn inverse(&self) -> Option<Self>;
    fn from_rational(r: &BigRational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl CoefficientRing for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl CoefficientRing for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        self.recip().ok()
    }
    fn from_rational(r: &BigRational) -> Self {
        RationalFunction::from_rational(r.clone())
    }
    fn is_one(&self) -> bool {
        RationalFunction::is_one(self)
    }
}

/// `c0 + c1 u + ... + cN u^N + O(u^(N+1))`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<R> {
    order: usize,
    coeffs: Vec<R>,
}

impl<R: CoefficientRing> TruncatedSeries<R> {
    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients past the order.
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.resize(order + 1, R::zero());
        TruncatedSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    pub fn constant(c: R, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `c * u^k`.
    pub fn monomial(c: R, k: usize, order: usize) -> Self {
        let mut coeffs = vec![R::zero(); order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        TruncatedSeries { order, coeffs }
    }

    /// The series variable `u`.
    pub fn variable(order: usize) -> Self {
        Self::monomial(R::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `u^n`; errors past the truncation order.
    pub fn coefficient(&self, n: usize) -> Result<&R, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::BeyondOrder {
            n,
            order: self.order,
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].add(&rhs.coeffs[i]))
            .collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].sub(&rhs.coeffs[i]))
            .collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(R::neg).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![R::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        TruncatedSeries { order, coeffs }
    }

    /// `h` with `h * rhs = self` to the common order.
    pub fn div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        let order = self.order.min(rhs.order);
        let inv0 = rhs.coeffs[0]
            .inverse()
            .ok_or_else(|| SeriesError::NonUnitConstant(rhs.coeffs[0].to_string()))?;
        let mut out: Vec<R> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                if !rhs.coeffs[k].is_zero() {
                    acc = acc.sub(&rhs.coeffs[k].mul(&out[n - k]));
                }
            }
            out.push(acc.mul(&inv0));
        }
        Ok(TruncatedSeries { order, coeffs: out })
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        Self::one(self.order).div(self)
    }

    /// Formal derivative; the result has order `N - 1` (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let coeffs = (0..=order)
            .map(|i| match self.coeffs.get(i + 1) {
                Some(c) => c.mul(&R::from_integer(i as i64 + 1)),
                None => R::zero(),
            })
            .collect();
        TruncatedSeries { order, coeffs }
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogConstantTerm(self.coeffs[0].to_string()));
        }
        // n * g_n = n * f_n - sum_{k=1}^{n-1} k * g_k * f_{n-k}
        let n_max = self.order;
        let mut g = vec![R::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut acc = self.coeffs[n].mul(&R::from_integer(n as i64));
            for k in 1..n {
                if g[k].is_zero() || self.coeffs[n - k].is_zero() {
                    continue;
                }
                acc = acc.sub(&g[k].mul(&self.coeffs[n - k]).mul(&R::from_integer(k as i64)));
            }
            g[n] = acc.mul(&inv_int(n));
        }
        Ok(TruncatedSeries {
            order: n_max,
            coeffs: g,
        })
    }

    /// Formal exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm(self.coeffs[0].to_string()));
        }
        // n * h_n = sum_{k=1}^{n} k * f_k * h_{n-k}
        let n_max = self.order;
        let weighted: Vec<R> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.mul(&R::from_integer(k as i64)))
            .collect();
        let mut h = vec![R::zero(); n_max + 1];
        h[0] = R::one();
        for n in 1..=n_max {
            let mut acc = R::zero();
            for k in 1..=n {
                if weighted[k].is_zero() || h[n - k].is_zero() {
                    continue;
                }
                acc = acc.add(&weighted[k].mul(&h[n - k]));
            }
            h[n] = acc.mul(&inv_int(n));
        }
        Ok(TruncatedSeries {
            order: n_max,
            coeffs: h,
        })
    }

    /// `exp(e * log self)` for a series with constant term 1; the exponent
    /// may be any ring element (for instance a polynomial in `q`).
    pub fn pow(&self, e: &R) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogConstantTerm(self.coeffs[0].to_string()));
        }
        if e.is_zero() {
            return Ok(Self::one(self.order));
        }
        self.log()?.scale(e).exp()
    }

    /// `self^k` by repeated squaring.
    pub fn pow_int(&self, k: u32) -> Self {
        let mut result = Self::one(self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `g(u) = f(c * u^d)`, truncated to the original order.
    pub fn substitute(&self, c: &R, d: usize) -> Self {
        assert!(d >= 1, "substitution degree must be positive");
        let mut coeffs = vec![R::zero(); self.order + 1];
        let mut c_pow = R::one();
        for (k, a) in self.coeffs.iter().enumerate() {
            let idx = k * d;
            if idx > self.order {
                break;
            }
            coeffs[idx] = a.mul(&c_pow);
            c_pow = c_pow.mul(c);
        }
        TruncatedSeries {
            order: self.order,
            coeffs,
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map<S: CoefficientRing>(&self, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

fn inv_int<R: CoefficientRing>(n: usize) -> R {
    R::from_rational(&BigRational::new(BigInt::one(), BigInt::from(n)))
}

/// `c0 + c1*u + c2*u^2 + ...`, skipping zero terms and parenthesizing
/// coefficients that render with more than one token.
impl<R: CoefficientRing> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let text = c.to_string();
            let simple = !text[1..].contains([' ', '/', '*']);
            let coef = if simple { text } else { format!("({text})") };
            match k {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}*u")?,
                _ => write!(f, "{coef}*u^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(u^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{integer, rational, QPolynomial};

    type QSeries = TruncatedSeries<BigRational>;
    type RfSeries = TruncatedSeries<RationalFunction>;

    fn qs(c: &[i64], order: usize) -> QSeries {
        TruncatedSeries::new(c.iter().map(|&x| integer(x)).collect(), order)
    }

    fn q() -> RationalFunction {
        RationalFunction::q()
    }

    fn poly(c: &[i64]) -> RationalFunction {
        QPolynomial::from_ints(c).into()
    }

    #[test]
    fn mul_and_add_examples() {
        assert_eq!(qs(&[1, 1], 2).mul(&qs(&[1, -1], 2)), qs(&[1, 0, -1], 2));
        let f = qs(&[3, 1, 4], 3);
        assert_eq!(f.add(&QSeries::zero(3)), f);
        // 1/(1 - qu) * (1 - qu) = 1
        let one_minus_qu = RfSeries::new(vec![RationalFunction::one(), -q()], 3);
        let geo = RfSeries::new((0..=3).map(RationalFunction::q_pow).collect(), 3);
        assert_eq!(geo.mul(&one_minus_qu), RfSeries::one(3));
    }

    #[test]
    fn mixed_orders_take_the_minimum() {
        let f = qs(&[1, 2, 3, 4], 3).mul(&qs(&[1, 1], 1));
        assert_eq!(f.order(), 1);
        assert_eq!(
            f.coefficient(2),
            Err(SeriesError::BeyondOrder { n: 2, order: 1 })
        );
    }

    #[test]
    fn division_examples() {
        // (1 - q u^2) / (1 - q u) = 1 + q u + (q^2 - q) u^2 + ...
        let num = RfSeries::new(vec![RationalFunction::one(), RationalFunction::zero(), -q()], 5);
        let den = RfSeries::new(vec![RationalFunction::one(), -q()], 5);
        let h = num.div(&den).unwrap();
        assert_eq!(h.coefficient(0).unwrap(), &RationalFunction::one());
        assert_eq!(h.coefficient(1).unwrap(), &q());
        for n in 2..=5 {
            let expect = RationalFunction::q_pow(n) - RationalFunction::q_pow(n - 1);
            assert_eq!(h.coefficient(n as usize).unwrap(), &expect);
        }
        assert_eq!(h.coefficient(5).unwrap(), &poly(&[0, 0, 0, 0, -1, 1]));

        assert_eq!(qs(&[1], 3).div(&qs(&[1, -1], 3)).unwrap(), qs(&[1, 1, 1, 1], 3));
        let f = qs(&[2, 5, -1, 7], 3);
        assert_eq!(f.div(&f).unwrap(), QSeries::one(3));
        assert!(matches!(
            f.div(&qs(&[0, 1], 3)),
            Err(SeriesError::NonUnitConstant(_))
        ));
    }

    #[test]
    fn log_exp_examples() {
        let one_plus_u = qs(&[1, 1], 6);
        assert_eq!(one_plus_u.log().unwrap().exp().unwrap(), one_plus_u);

        let geo = qs(&[1, 1, 1, 1, 1], 4);
        let expect = QSeries::new(
            vec![integer(0), integer(1), rational(1, 2), rational(1, 3), rational(1, 4)],
            4,
        );
        assert_eq!(geo.log().unwrap(), expect);

        // exp(u / (q - 1)) has u^2 coefficient 1 / (2 (q - 1)^2)
        let inv = RationalFunction::one().checked_div(&poly(&[-1, 1])).unwrap();
        let e = RfSeries::monomial(inv, 1, 2).exp().unwrap();
        let expect = RationalFunction::one()
            .checked_div(&poly(&[2, -4, 2]))
            .unwrap();
        assert_eq!(e.coefficient(2).unwrap(), &expect);

        assert!(matches!(qs(&[2, 1], 3).log(), Err(SeriesError::LogConstantTerm(_))));
        assert!(matches!(qs(&[1, 1], 3).exp(), Err(SeriesError::ExpConstantTerm(_))));
    }

    #[test]
    fn pow_examples() {
        // (1 + u)^q: u^2 coefficient q (q - 1) / 2
        let f = RfSeries::new(vec![RationalFunction::one(), RationalFunction::one()], 4);
        let g = f.pow(&q()).unwrap();
        let expect = poly(&[0, -1, 1]).scale(&rational(1, 2));
        assert_eq!(g.coefficient(2).unwrap(), &expect);
        assert_eq!(g.coefficient(2).unwrap().eval_int(3).unwrap(), integer(3));

        // (1 + u^2)^((q^2 - q) / 2): u^2 coefficient is the exponent itself
        let e = poly(&[0, -1, 1]).scale(&rational(1, 2));
        let h = RfSeries::new(
            vec![RationalFunction::one(), RationalFunction::zero(), RationalFunction::one()],
            4,
        )
        .pow(&e)
        .unwrap();
        assert_eq!(h.coefficient(2).unwrap(), &e);

        assert_eq!(qs(&[1, 3, 3], 4).pow(&integer(0)).unwrap(), QSeries::one(4));
    }

    #[test]
    fn substitution_examples() {
        let geo = qs(&[1, 1, 1, 1], 3);
        let alt = geo.substitute(&integer(-1), 1);
        assert_eq!(alt, qs(&[1, -1, 1, -1], 3));
        assert_eq!(qs(&[1, 1], 4).substitute(&integer(1), 2), qs(&[1, 0, 1], 4));

        let rgeo = RfSeries::new(vec![RationalFunction::one(); 4], 3);
        let sub = rgeo.substitute(&RationalFunction::q_pow(-1), 1);
        let direct = RfSeries::one(3)
            .div(&RfSeries::new(
                vec![RationalFunction::one(), -RationalFunction::q_pow(-1)],
                3,
            ))
            .unwrap();
        assert_eq!(sub, direct);
    }

    #[test]
    fn coefficient_examples() {
        let geo = RfSeries::new((0..=4).map(RationalFunction::q_pow).collect(), 4);
        assert_eq!(geo.coefficient(3).unwrap(), &RationalFunction::q_pow(3));
        assert!(geo.coefficient(5).is_err());
    }

    #[test]
    fn renders_series() {
        assert_eq!(qs(&[1, 0, -2], 2).to_string(), "1 + -2*u^2 + O(u^3)");
        let s = RfSeries::new(vec![RationalFunction::one(), poly(&[0, -1, 1])], 1);
        assert_eq!(s.to_string(), "1 + (q^2 - q)*u + O(u^2)");
    }
}
