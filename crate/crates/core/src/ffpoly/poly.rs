use std::fmt;

use super::{OracleError, PrimeField};

/// A polynomial over F_p; `coeffs[i]` is the coefficient of `x^i`, with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl FieldPoly {
    /// Reduces the integer coefficients mod p and trims.
    pub fn new(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_reduced(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub(crate) fn from_reduced(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FieldPoly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        FieldPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        FieldPoly {
            field,
            coeffs: vec![1],
        }
    }

    /// `x`.
    pub fn x(field: PrimeField) -> Self {
        FieldPoly {
            field,
            coeffs: vec![0, 1],
        }
    }

    /// The monic polynomial of degree `n` whose lower coefficients are the
    /// base-`p` digits of `index`, lowest degree first.
    pub fn monic_from_index(field: PrimeField, n: usize, mut index: u64) -> Self {
        let p = field.modulus();
        let mut coeffs = Vec::with_capacity(n + 1);
        for _ in 0..n {
            coeffs.push(index % p);
            index /= p;
        }
        coeffs.push(1);
        FieldPoly { field, coeffs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc);
                self.scale(inv)
            }
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        Self::from_reduced(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::from_reduced(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_u64(i as u64)))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &FieldPoly) -> Self {
        let f = self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                f.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    rhs.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::from_reduced(f, coeffs)
    }

    pub fn mul(&self, rhs: &FieldPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Self::from_reduced(f, coeffs)
    }

    fn check_field(&self, other: &FieldPoly) -> Result<(), OracleError> {
        if self.field != other.field {
            return Err(OracleError::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        Ok(())
    }

    /// Euclidean division by a nonzero divisor over the same field.
    pub fn div_rem(&self, divisor: &FieldPoly) -> Result<(FieldPoly, FieldPoly), OracleError> {
        self.check_field(divisor)?;
        let dd = divisor.degree().ok_or(OracleError::ZeroPolynomial)?;
        Ok(self.div_rem_unchecked(divisor, dd))
    }

    fn div_rem_unchecked(&self, divisor: &FieldPoly, dd: usize) -> (FieldPoly, FieldPoly) {
        let f = self.field;
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return (Self::zero(f), self.clone());
        };
        let lc_inv = f.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = f.mul(rem[k + dd], lc_inv);
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_reduced(f, quot), Self::from_reduced(f, rem))
    }

    pub fn rem(&self, divisor: &FieldPoly) -> Result<FieldPoly, OracleError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Quotient if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &FieldPoly) -> Result<Option<FieldPoly>, OracleError> {
        let (quot, rem) = self.div_rem(divisor)?;
        Ok(rem.is_zero().then_some(quot))
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &FieldPoly) -> Result<FieldPoly, OracleError> {
        let mut acc = FieldPoly::one(self.field).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// Monic gcd by the Euclidean algorithm. `gcd(f, 0)` is `f` made monic.
pub fn poly_gcd(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, OracleError> {
    a.check_field(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(OracleError::ZeroPolynomial);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    while let Some(db) = b.degree() {
        let r = a.div_rem_unchecked(&b, db).1;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// `Res(a, b) = lc(a)^deg(b) * prod_{a(alpha) = 0} b(alpha)`.
///
/// Computed by the remainder recurrence
/// `Res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * Res(b, r)`
/// with `r = a mod b`. Under this convention `Res(x - s, x - t) = s - t`.
pub fn resultant(a: &FieldPoly, b: &FieldPoly) -> Result<u64, OracleError> {
    a.check_field(b)?;
    if a.is_zero() || b.is_zero() {
        return Err(OracleError::ZeroPolynomial);
    }
    let f = a.field;
    let mut acc = 1u64;
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        if n == 0 {
            return Ok(f.mul(acc, f.pow(b.coeffs[0], m as u64)));
        }
        if m == 0 {
            return Ok(f.mul(acc, f.pow(a.coeffs[0], n as u64)));
        }
        let r = a.div_rem_unchecked(&b, n).1;
        let Some(dr) = r.degree() else {
            return Ok(0);
        };
        if m * n % 2 == 1 {
            acc = f.neg(acc);
        }
        acc = f.mul(acc, f.pow(b.coeffs[n], (m - dr) as u64));
        a = b;
        b = r;
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            terms.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}*{var}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f2 = fp(2);
        let x2_x = FieldPoly::new(f2, &[0, 1, 1]);
        let x1 = FieldPoly::new(f2, &[1, 1]);
        assert_eq!(poly_gcd(&x2_x, &x1).unwrap(), x1);
        let x2_1 = FieldPoly::new(f2, &[1, 0, 1]);
        assert_eq!(poly_gcd(&x2_1, &x1).unwrap(), x1);
        let f5 = fp(5);
        let g = FieldPoly::new(f5, &[1, 2, 3]);
        assert_eq!(poly_gcd(&g, &FieldPoly::zero(f5)).unwrap(), g.monic());
        assert!(poly_gcd(&g, &FieldPoly::zero(f5)).unwrap().is_monic());
        assert_eq!(
            poly_gcd(&g, &x1),
            Err(OracleError::FieldMismatch(5, 2))
        );
    }

    #[test]
    fn resultant_examples() {
        let f7 = fp(7);
        // Res(x - 3, x - 5) = 3 - 5
        let a = FieldPoly::new(f7, &[-3, 1]);
        let b = FieldPoly::new(f7, &[-5, 1]);
        assert_eq!(resultant(&a, &b).unwrap(), f7.reduce(-2));
        assert_eq!(resultant(&b, &a).unwrap(), 2);
        // shared root gives zero
        let c = FieldPoly::new(f7, &[15, -8, 1]); // (x - 3)(x - 5)
        assert_eq!(resultant(&c, &a).unwrap(), 0);
        let f3 = fp(3);
        let x2_1 = FieldPoly::new(f3, &[1, 0, 1]);
        assert_eq!(resultant(&x2_1, &FieldPoly::x(f3)).unwrap(), 1);
        assert_eq!(
            resultant(&x2_1, &FieldPoly::zero(f3)),
            Err(OracleError::ZeroPolynomial)
        );
    }

    /// Res(a, b) against the root-product definition for polynomials that
    /// split over F_p.
    #[test]
    fn resultant_matches_root_product() {
        let f = fp(11);
        let roots_a = [1u64, 4, 9];
        let roots_b = [2u64, 4 + 3, 10, 0];
        let build = |roots: &[u64]| {
            roots.iter().fold(FieldPoly::one(f), |acc, &r| {
                acc.mul(&FieldPoly::from_reduced(f, vec![f.neg(r), 1]))
            })
        };
        let a = build(&roots_a).scale(3);
        let b = build(&roots_b).scale(2);
        let mut expect = f.pow(3, roots_b.len() as u64);
        for &r in &roots_a {
            expect = f.mul(expect, b.eval(r));
        }
        assert_eq!(resultant(&a, &b).unwrap(), expect);
    }

    #[test]
    fn index_enumeration_order() {
        let f = fp(3);
        assert_eq!(FieldPoly::monic_from_index(f, 2, 0).coeffs(), &[0, 0, 1]);
        assert_eq!(FieldPoly::monic_from_index(f, 2, 1).coeffs(), &[1, 0, 1]);
        assert_eq!(FieldPoly::monic_from_index(f, 2, 5).coeffs(), &[2, 1, 1]);
    }

    #[test]
    fn rendering() {
        let f = fp(5);
        assert_eq!(FieldPoly::new(f, &[1, 0, 3, 1]).to_string(), "x^3 + 3*x^2 + 1");
    }
}
