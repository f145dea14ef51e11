//! Allocation-free per-polynomial statistics for the enumeration loop.
//!
//! One resultant computation decides square-freeness and yields the
//! discriminant. Irreducible factors are counted by degree with the
//! distinct-degree method run modulo `f` itself: with `h_k = x^(p^k) mod f`,
//! `deg gcd(f, h_k - x)` is the total degree of the irreducible factors
//! whose degree divides `k`. Powers of Frobenius are applied through the
//! matrix whose rows are `x^(ip) mod f`.

use strength_reduce::{StrengthReducedU32, StrengthReducedU64};

use super::PrimeField;

/// What the enumeration needs to know about one square-free polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PolyFacts {
    pub n1: u64,
    pub n2: u64,
    pub factors: u64,
    /// Whether the discriminant is a nonzero square; `None` when `p = 2`.
    pub disc_square: Option<bool>,
}

pub(crate) struct Kernel {
    p: u64,
    m: StrengthReducedU64,
    /// Set with `lazy`, when every value reduced stays below 2^32.
    m32: Option<StrengthReducedU32>,
    n: usize,
    /// Inverses of `1..p` when `p` is small enough to tabulate.
    inv: Vec<u64>,
    /// `is_square[a]` for small `p`.
    square: Vec<bool>,
    /// Small `p`: sums of up to 64 products of reduced values stay below
    /// 2^32, so accumulation can skip reductions.
    lazy: bool,
    field: PrimeField,
}

/// Reusable buffers sized for one degree.
pub(crate) struct Scratch {
    a: Vec<u64>,
    b: Vec<u64>,
    h: Vec<u64>,
    t: Vec<u64>,
    frob: Vec<u64>,
    negf: Vec<u64>,
    wide: Vec<u64>,
    counts: Vec<u64>,
}

const TABLE_LIMIT: u64 = 1 << 20;

impl Kernel {
    pub fn new(field: PrimeField, n: usize) -> Self {
        let p = field.modulus();
        let (inv, square) = if p <= TABLE_LIMIT {
            let mut inv = vec![0; p as usize];
            for a in 1..p {
                if inv[a as usize] == 0 {
                    let b = field.inv(a);
                    inv[a as usize] = b;
                    inv[b as usize] = a;
                }
            }
            let mut square = vec![false; p as usize];
            for a in 1..p {
                square[(a * a % p) as usize] = true;
            }
            (inv, square)
        } else {
            (Vec::new(), Vec::new())
        };
        Kernel {
            p,
            m: StrengthReducedU64::new(p),
            n,
            inv,
            square,
            lazy: p < 1 << 12,
            m32: (p < 1 << 12).then(|| StrengthReducedU32::new(p as u32)),
            field,
        }
    }

    pub fn scratch(&self) -> Scratch {
        let n = self.n;
        Scratch {
            a: vec![0; n + 1],
            b: vec![0; n + 1],
            h: vec![0; n],
            t: vec![0; n + 1],
            frob: vec![0; n * n],
            negf: vec![0; n],
            wide: vec![0; n + n.max(4 * n)],
            counts: vec![0; n + 1],
        }
    }

    #[inline]
    fn red(&self, x: u64) -> u64 {
        match self.m32 {
            Some(m) => {
                debug_assert!(x < 1 << 32);
                (x as u32 % m) as u64
            }
            None => x % self.m,
        }
    }

    #[inline]
    fn inverse(&self, a: u64) -> u64 {
        if self.inv.is_empty() {
            self.field.inv(a)
        } else {
            self.inv[a as usize]
        }
    }

    fn is_square(&self, a: u64) -> bool {
        if self.square.is_empty() {
            self.field.pow(a, (self.p - 1) / 2) == 1
        } else {
            self.square[a as usize]
        }
    }

    /// Facts about the monic `f` (`f.len() == n + 1`, `f[n] == 1`), or
    /// `None` if it is not square-free.
    pub fn facts(&self, f: &[u64], s: &mut Scratch) -> Option<PolyFacts> {
        let n = self.n;
        debug_assert_eq!(f.len(), n + 1);
        let res = self.resultant_with_derivative(f, s);
        if res == 0 {
            return None;
        }
        let disc_square = (self.p != 2).then(|| {
            let sign_flip = (n * (n - 1) / 2) % 2 == 1;
            let disc = if sign_flip { self.p - res } else { res };
            self.is_square(disc)
        });
        self.count_by_degree(f, s);
        let c = &s.counts;
        Some(PolyFacts {
            n1: c[1],
            n2: if n >= 2 { c[2] } else { 0 },
            factors: c[1..].iter().sum(),
            disc_square,
        })
    }

    /// `Res(f, f')` by the remainder sequence; zero iff `f` has a repeated
    /// factor.
    fn resultant_with_derivative(&self, f: &[u64], s: &mut Scratch) -> u64 {
        let p = self.p;
        let n = self.n;
        s.a[..=n].copy_from_slice(f);
        for i in 1..=n {
            s.b[i - 1] = self.red(f[i] * self.red(i as u64));
        }
        s.b[n] = 0;
        let (mut a, mut b) = (&mut s.a, &mut s.b);
        let mut da = n;
        let Some(mut db) = degree(&b[..n]) else {
            return 0;
        };
        let mut res = 1u64;
        loop {
            if db == 0 {
                return self.red(res * self.field.pow(b[0], da as u64));
            }
            let lb = b[db];
            self.reduce_by(a, da, b, db);
            let Some(dr) = degree(&a[..db]) else {
                return 0;
            };
            if da % 2 == 1 && db % 2 == 1 {
                res = self.red(p - res);
            }
            res = self.red(res * self.field.pow(lb, (da - dr) as u64));
            std::mem::swap(&mut a, &mut b);
            da = db;
            db = dr;
        }
    }

    /// Replaces `a` (degree `da`) by its remainder mod `b` (degree `db`).
    /// `b` must be reduced; `a` comes back reduced.
    #[inline]
    fn reduce_by(&self, a: &mut [u64], da: usize, b: &[u64], db: usize) {
        let p = self.p;
        let inv_lb = self.inverse(b[db]);
        if self.lazy {
            // entries pick up at most da - db + 1 products below p^2
            for i in (db..=da).rev() {
                let c = self.red(self.red(a[i]) * inv_lb);
                a[i] = 0;
                if c == 0 {
                    continue;
                }
                let m = p - c;
                let off = i - db;
                for j in 0..db {
                    a[off + j] += m * b[j];
                }
            }
            for x in &mut a[..db] {
                *x = self.red(*x);
            }
            return;
        }
        for i in (db..=da).rev() {
            let c = a[i] * inv_lb % self.m;
            if c == 0 {
                continue;
            }
            let m = p - c;
            let off = i - db;
            for j in 0..db {
                a[off + j] = (a[off + j] + m * b[j]) % self.m;
            }
            a[i] = 0;
        }
    }

    /// Degree of `gcd(a, b)` where `a` has degree `da` and `b` is arbitrary
    /// of length at most `da`; both are overwritten.
    fn gcd_degree(&self, a: &mut Vec<u64>, b: &mut Vec<u64>, da: usize) -> usize {
        let Some(mut db) = degree(&b[..da.min(b.len())]) else {
            return da;
        };
        let mut da = da;
        let (mut a, mut b) = (a, b);
        loop {
            if db == 0 {
                return 0;
            }
            if da >= db {
                self.reduce_by(a, da, b, db);
                match degree(&a[..db]) {
                    None => return db,
                    Some(dr) => da = dr,
                }
            }
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut da, &mut db);
        }
    }

    /// Fills `s.counts[d]` with the number of irreducible factors of degree
    /// `d` of the square-free monic `f`.
    fn count_by_degree(&self, f: &[u64], s: &mut Scratch) {
        let n = self.n;
        let p = self.p;
        s.counts.iter_mut().for_each(|c| *c = 0);
        if n == 1 {
            s.counts[1] = 1;
            return;
        }
        for i in 0..n {
            s.negf[i] = self.red(p - f[i]);
        }
        self.frobenius_matrix(s);
        // h = x^p mod f is row 1
        s.h.copy_from_slice(&s.frob[n..2 * n]);
        let mut remaining = n;
        let mut k = 1;
        while 2 * k <= remaining {
            s.a[..=n].copy_from_slice(f);
            s.t[..n].copy_from_slice(&s.h);
            s.t[n] = 0;
            s.t[1] = self.red(s.t[1] + p - 1);
            let d = self.gcd_degree(&mut s.a, &mut s.t, n) as u64;
            let mut smaller = 0;
            for j in 1..k {
                if k % j == 0 {
                    smaller += j as u64 * s.counts[j];
                }
            }
            let c = (d - smaller) / k as u64;
            s.counts[k] = c;
            remaining -= k * c as usize;
            k += 1;
            if 2 * k <= remaining {
                self.apply_frobenius(s);
            }
        }
        if remaining > 0 {
            s.counts[remaining] += 1;
        }
    }

    /// Rows `x^(ip) mod f` for `i < n`, in `s.frob` row-major.
    fn frobenius_matrix(&self, s: &mut Scratch) {
        let n = self.n;
        let p = self.p;
        s.frob.iter_mut().for_each(|c| *c = 0);
        s.frob[0] = 1;
        if p <= 4 * n as u64 {
            // row i is row i-1 times x^p: shift up by p, then fold the top
            // p coefficients back down with x^n = -(f_0 + ... + f_{n-1} x^{n-1})
            let pu = p as usize;
            let w = &mut s.wide;
            for i in 1..n {
                w.iter_mut().for_each(|c| *c = 0);
                w[pu..pu + n].copy_from_slice(&s.frob[(i - 1) * n..i * n]);
                for t in (n..n + pu).rev() {
                    let c = self.red(w[t]);
                    if c == 0 {
                        continue;
                    }
                    let (low, _) = w.split_at_mut(t);
                    let window = &mut low[t - n..t];
                    if self.lazy {
                        for (x, &g) in window.iter_mut().zip(&s.negf) {
                            *x += c * g;
                        }
                    } else {
                        for (x, &g) in window.iter_mut().zip(&s.negf) {
                            *x = (*x + c * g) % self.m;
                        }
                    }
                }
                for (dst, &c) in s.frob[i * n..(i + 1) * n].iter_mut().zip(w.iter()) {
                    *dst = self.red(c);
                }
            }
        } else {
            // x^p by squaring, then successive products
            let mut xp = vec![0u64; n];
            let mut base = vec![0u64; n];
            xp[0] = 1;
            base[1] = 1;
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    xp = self.mul_mod(&xp, &base, s);
                }
                e >>= 1;
                if e > 0 {
                    base = self.mul_mod(&base, &base, s);
                }
            }
            let mut row = xp.clone();
            for i in 1..n {
                s.frob[i * n..(i + 1) * n].copy_from_slice(&row);
                if i + 1 < n {
                    row = self.mul_mod(&row, &xp, s);
                }
            }
        }
    }

    /// `a * b mod f` for `a`, `b` of length `n`, using `s.negf`.
    fn mul_mod(&self, a: &[u64], b: &[u64], s: &mut Scratch) -> Vec<u64> {
        let n = self.n;
        let w = &mut s.wide;
        w.iter_mut().for_each(|c| *c = 0);
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                w[i + j] = (w[i + j] + a[i] * b[j]) % self.m;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = w[i];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                w[i - n + j] = (w[i - n + j] + c * s.negf[j]) % self.m;
            }
            w[i] = 0;
        }
        w[..n].to_vec()
    }

    /// `h <- h^p mod f = sum_i h_i x^(ip)`.
    fn apply_frobenius(&self, s: &mut Scratch) {
        let n = self.n;
        let out = &mut s.t[..n];
        if self.lazy {
            out.iter_mut().for_each(|c| *c = 0);
            for (i, &hi) in s.h.iter().enumerate() {
                if hi == 0 {
                    continue;
                }
                let row = &s.frob[i * n..(i + 1) * n];
                for j in 0..n {
                    out[j] += hi * row[j];
                }
            }
            for c in out.iter_mut() {
                *c = self.red(*c);
            }
        } else {
            out.iter_mut().for_each(|c| *c = 0);
            for (i, &hi) in s.h.iter().enumerate() {
                let row = &s.frob[i * n..(i + 1) * n];
                for j in 0..n {
                    out[j] = (out[j] + hi * row[j]) % self.m;
                }
            }
        }
        s.h.copy_from_slice(&s.t[..n]);
    }
}

#[inline]
fn degree(c: &[u64]) -> Option<usize> {
    c.iter().rposition(|&x| x != 0)
}

/// Advances the low `n` coefficients as a base-`p` counter, constant term
/// fastest.
#[inline]
pub(crate) fn increment(coeffs: &mut [u64], p: u64) {
    for c in coeffs.iter_mut() {
        *c += 1;
        if *c < p {
            return;
        }
        *c = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{
        count_irreducible_quadratic_factors, count_linear_factors, discriminant_class,
        factor_count_distinct_degree, is_squarefree, FieldPoly, ResidueClass,
    };

    /// Every monic polynomial of small degree agrees with the reference
    /// per-polynomial functions.
    #[test]
    fn agrees_with_reference_functions() {
        for (p, n_max) in [(2u64, 8usize), (3, 6), (5, 4), (7, 3), (13, 2)] {
            let field = PrimeField::new(p).unwrap();
            for n in 1..=n_max {
                let kernel = Kernel::new(field, n);
                let mut s = kernel.scratch();
                let mut coeffs = vec![0; n + 1];
                coeffs[n] = 1;
                for _ in 0..p.pow(n as u32) {
                    let f = FieldPoly::from_reduced(field, coeffs.clone());
                    let got = kernel.facts(&coeffs, &mut s);
                    assert_eq!(got.is_some(), is_squarefree(&f), "{f} over F_{p}");
                    if let Some(facts) = got {
                        assert_eq!(facts.n1, count_linear_factors(&f).unwrap() as u64, "{f}");
                        assert_eq!(
                            facts.n2,
                            count_irreducible_quadratic_factors(&f).unwrap() as u64,
                            "{f}"
                        );
                        assert_eq!(facts.factors, factor_count_distinct_degree(&f).unwrap() as u64, "{f}");
                        let class = (p != 2).then(|| discriminant_class(&f).unwrap() == ResidueClass::Residue);
                        assert_eq!(facts.disc_square, class, "{f}");
                    }
                    increment(&mut coeffs[..n], p);
                }
            }
        }
    }

    /// The squaring branch of the Frobenius matrix matches the shifting one.
    #[test]
    fn large_prime_branch() {
        let field = PrimeField::new(101).unwrap();
        let kernel = Kernel::new(field, 3);
        let mut s = kernel.scratch();
        for coeffs in [[1u64, 0, 0, 1], [3, 7, 0, 1], [100, 0, 1, 1], [2, 5, 9, 1]] {
            let f = FieldPoly::from_reduced(field, coeffs.to_vec());
            let facts = kernel.facts(&coeffs, &mut s);
            assert_eq!(facts.is_some(), is_squarefree(&f));
            if let Some(facts) = facts {
                assert_eq!(facts.factors, factor_count_distinct_degree(&f).unwrap() as u64);
                assert_eq!(facts.n1, count_linear_factors(&f).unwrap() as u64);
            }
        }
    }

    #[test]
    fn counter_order() {
        let mut c = vec![0, 0];
        increment(&mut c, 3);
        assert_eq!(c, [1, 0]);
        increment(&mut c, 3);
        increment(&mut c, 3);
        assert_eq!(c, [0, 1]);
    }
}
