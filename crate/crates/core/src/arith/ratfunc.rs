//! The field Q(q) of rational functions, kept in a canonical reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ArithError, BigRational, QPolynomial};

/// An element of Q(q).
///
/// Canonical form: `gcd(num, den) = 1` and `den` is monic, so two rational
/// functions are equal exactly when their representations are equal. Zero
/// is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: QPolynomial,
    den: QPolynomial,
}

impl RationalFunction {
    /// Reduces `num / den` to canonical form.
    pub fn new(num: QPolynomial, den: QPolynomial) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPolynomial, den: QPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let v = num.q_valuation().unwrap().min(den.q_valuation().unwrap());
        let (mut num, mut den) = if v > 0 {
            (num.shift_down(v), den.shift_down(v))
        } else {
            (num, den)
        };
        if !den.is_constant() {
            if let Some(quot) = num.exact_div(&den) {
                return Self::from_poly(quot);
            }
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        Self::finish(num, den)
    }

    /// Makes an already-coprime pair canonical by scaling to a monic denominator.
    fn finish(num: QPolynomial, den: QPolynomial) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: QPolynomial) -> Self {
        RationalFunction {
            num: p,
            den: QPolynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(QPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(QPolynomial::one())
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::from_poly(QPolynomial::q())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(QPolynomial::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(QPolynomial::constant(c))
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = QPolynomial::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RationalFunction {
                num: QPolynomial::one(),
                den: m,
            }
        }
    }

    pub fn numerator(&self) -> &QPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &QPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial this equals, if it is one.
    pub fn as_polynomial(&self) -> Option<&QPolynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::finish(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<Self, ArithError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Exact value at `q = q0`.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational, ArithError> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(ArithError::Pole(q0.to_string()));
        }
        Ok(self.num.eval(q0) / d)
    }

    pub fn eval_int(&self, q0: i64) -> Result<BigRational, ArithError> {
        self.eval(&BigRational::from_integer(BigInt::from(q0)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self * &rhs.recip()?)
    }

    /// Expansion in powers of `t = 1/q` around `q = infinity`.
    ///
    /// Returns `(v, coeffs)` such that `self = sum_k coeffs[k] * t^(v + k)`
    /// with `coeffs` covering `t^v .. t^(v + len - 1)`. Zero yields an empty
    /// coefficient list.
    pub fn expand_at_infinity(&self, len: usize) -> (i64, Vec<BigRational>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        // num(1/t) / den(1/t) = t^(deg den - deg num) * rev(num)(t) / rev(den)(t)
        let shift = self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64;
        let top = self.num.reversed();
        let bottom = self.den.reversed();
        let b0_inv = bottom.coeff(0).recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = top.coeff(k);
            for j in 1..=k.min(bottom.coeffs().len().saturating_sub(1)) {
                acc -= bottom.coeff(j) * &out[k - j];
            }
            out.push(acc * &b0_inv);
        }
        (shift, out)
    }

    /// Coefficients of `t^from .. t^(from + len - 1)` (with `t = 1/q`) in
    /// the expansion at infinity.
    pub fn inverse_q_coefficients(&self, from: i64, len: usize) -> Vec<BigRational> {
        let shift = self.expand_shift();
        let needed = (from + len as i64 - shift).max(0) as usize;
        let (_, raw) = self.expand_at_infinity(needed);
        (from..from + len as i64)
            .map(|k| {
                usize::try_from(k - shift)
                    .ok()
                    .and_then(|i| raw.get(i).cloned())
                    .unwrap_or_else(BigRational::zero)
            })
            .collect()
    }

    fn expand_shift(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
        }
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<QPolynomial> for RationalFunction {
    fn from(p: QPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num + &rhs.num);
        }
        // a/b + c/d with g = gcd(b, d): t = a(d/g) + c(b/g), then only gcd(t, g)
        // can still cancel.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RationalFunction::finish(num, &self.den * &rhs.den);
        }
        let b_g = self.den.exact_div(&g).expect("gcd divides");
        let d_g = rhs.den.exact_div(&g).expect("gcd divides");
        let t = &(&self.num * &d_g) + &(&rhs.num * &b_g);
        if t.is_zero() {
            return RationalFunction::zero();
        }
        let g2 = t.gcd(&g);
        if g2.is_one() {
            RationalFunction::finish(t, &self.den * &d_g)
        } else {
            let t = t.exact_div(&g2).expect("gcd divides");
            let g_g2 = g.exact_div(&g2).expect("gcd divides");
            RationalFunction::finish(t, &(&b_g * &d_g) * &g_g2)
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel: (a/b)(c/d) = (a/g1)(c/g2) / ((b/g2)(d/g1))
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let split = |p: &QPolynomial, g: &QPolynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.exact_div(g).expect("gcd divides")
            }
        };
        let num = &split(&self.num, &g1) * &split(&rhs.num, &g2);
        let den = &split(&self.den, &g2) * &split(&rhs.den, &g1);
        RationalFunction::finish(num, den)
    }
}

/// Panics on division by zero; use [`RationalFunction::checked_div`] to recover.
impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

/// Canonical text: `num` alone when the denominator is 1, otherwise
/// `num / den`, parenthesizing any side with more than one term.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.write_terms(f);
        }
        let terms = |p: &QPolynomial| p.coeffs().iter().filter(|c| !c.is_zero()).count();
        let side = |f: &mut fmt::Formatter<'_>, p: &QPolynomial| {
            if terms(p) > 1 {
                f.write_str("(")?;
                p.write_terms(f)?;
                f.write_str(")")
            } else {
                p.write_terms(f)
            }
        };
        side(f, &self.num)?;
        f.write_str(" / ")?;
        side(f, &self.den)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_monomial(s: &str) -> Result<QPolynomial, ArithError> {
    let bad = || ArithError::Parse(s.to_string());
    let (coef, var) = match s.rsplit_once('*') {
        Some((c, v)) => (parse_rational(c)?, Some(v)),
        None if s.contains('q') => (BigRational::one(), Some(s)),
        None => (parse_rational(s)?, None),
    };
    let exp = match var {
        None => 0,
        Some("q") => 1,
        Some(v) => v
            .strip_prefix("q^")
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(bad)?,
    };
    Ok(QPolynomial::monomial(coef, exp))
}

fn parse_poly(s: &str) -> Result<QPolynomial, ArithError> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s)
        .trim();
    if s.is_empty() {
        return Err(ArithError::Parse(s.to_string()));
    }
    let mut total = QPolynomial::zero();
    let mut sign = 1i64;
    let mut rest = s;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    loop {
        let cut = [" + ", " - "]
            .iter()
            .filter_map(|sep| rest.find(sep))
            .min();
        let (term, next) = match cut {
            Some(i) => (&rest[..i], Some(&rest[i..])),
            None => (rest, None),
        };
        let mono = parse_monomial(term.trim())?;
        total = if sign > 0 { &total + &mono } else { &total - &mono };
        match next {
            Some(n) => {
                sign = if n.starts_with(" + ") { 1 } else { -1 };
                rest = &n[3..];
            }
            None => break,
        }
    }
    Ok(total)
}

/// Parses the canonical rendering produced by `Display`.
impl FromStr for RationalFunction {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(" / ") {
            Some((n, d)) => RationalFunction::new(parse_poly(n)?, parse_poly(d)?),
            None => Ok(RationalFunction::from_poly(parse_poly(s)?)),
        }
    }
}
