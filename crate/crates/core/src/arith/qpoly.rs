//! Dense univariate polynomials in `q` with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::BigRational;

/// A polynomial in the indeterminate `q` over Q.
///
/// `coeffs[i]` is the coefficient of `q^i`. The vector never has trailing
/// zeros, so the zero polynomial is the empty vector and structural equality
/// is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// `c * q^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        QPolynomial { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    /// Builds a polynomial from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `q^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Largest `k` with `q^k` dividing `self`; `None` for zero.
    pub fn q_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True if the polynomial is `c * q^k` for some nonzero `c`.
    pub fn is_monomial(&self) -> bool {
        match self.q_valuation() {
            Some(v) => v + 1 == self.coeffs.len(),
            None => false,
        }
    }

    /// Divides by `q^k`. The caller guarantees `k <= q_valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || self.q_valuation().unwrap() >= k);
        QPolynomial {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficient-reversed polynomial `q^deg * p(1/q)`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(coeffs)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &QPolynomial) -> (QPolynomial, QPolynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &QPolynomial) -> Option<QPolynomial> {
        let (quot, rem) = self.div_rem(divisor);
        rem.is_zero().then_some(quot)
    }

    /// Monic greatest common divisor over Q.
    ///
    /// Common powers of `q` are split off first, then the Euclidean algorithm
    /// runs on monic remainders. `gcd(0, 0)` is zero.
    pub fn gcd(&self, other: &QPolynomial) -> QPolynomial {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        let va = self.q_valuation().unwrap();
        let vb = other.q_valuation().unwrap();
        let common = va.min(vb);
        let mut a = self.shift_down(va).monic();
        let mut b = other.shift_down(vb).monic();
        if a.is_constant() || b.is_constant() {
            return Self::one().shift_up(common);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.shift_up(common)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// The coefficients as integers, if they all are.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub(crate) fn write_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f)
    }
}

impl Add<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Sub<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, BigRational::zero());
        for (a, b) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Mul<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPolynomial {
        QPolynomial::from_ints(c)
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(p(&[1, 0, 0]), p(&[1]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn div_rem_reconstructs_dividend() {
        let a = p(&[3, -1, 0, 2, 5]);
        let b = p(&[1, 2, 1]);
        let (quot, rem) = a.div_rem(&b);
        assert!(rem.degree() < b.degree());
        assert_eq!(&(&quot * &b) + &rem, a);
    }

    #[test]
    fn gcd_of_shared_cyclotomic_factor() {
        // (q^2 - 1) and (q^3 - 1) share q - 1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 0, 0, 1])), p(&[-1, 1]));
        // q^3 and q^2 + q share q
        assert_eq!(p(&[0, 0, 0, 1]).gcd(&p(&[0, 1, 1])), p(&[0, 1]));
        assert_eq!(p(&[0, 0, 2]).gcd(&QPolynomial::zero()), p(&[0, 0, 1]));
        assert!(p(&[1, 1]).gcd(&p(&[-1, 1])).is_one());
    }

    #[test]
    fn renders_descending() {
        assert_eq!(p(&[0, -1, 1]).to_string(), "q^2 - q");
        assert_eq!(p(&[-1, 0, -3]).to_string(), "-3*q^2 - 1");
        assert_eq!(QPolynomial::zero().to_string(), "0");
        let half = QPolynomial::monomial(BigRational::new(1.into(), 2.into()), 1);
        assert_eq!(half.to_string(), "1/2*q");
    }

    #[test]
    fn eval_and_pow() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(p(&[1, 1]).pow(3).eval(&two), BigRational::from_integer(27.into()));
        assert!(p(&[5, 7]).pow(0).is_one());
    }
}
