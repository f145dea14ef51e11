use std::fmt;

use super::OracleError;

/// The prime field F_p, `2 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

pub(crate) fn is_prime(n: u64) -> bool {
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

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, OracleError> {
        if !(2..1 << 31).contains(&p) {
            return Err(OracleError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(OracleError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    /// The element `n mod p` for a non-negative integer `n`.
    pub fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(9), Err(OracleError::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(OracleError::ModulusOutOfRange(1)));
        assert_eq!(
            PrimeField::new(1 << 31),
            Err(OracleError::ModulusOutOfRange(1 << 31))
        );
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(13).unwrap();
        for a in 1..13 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.reduce(-1), 12);
        assert_eq!(f.sub(2, 5), 10);
    }
}
