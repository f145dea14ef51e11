//! Factor statistics of individual polynomials and the exhaustive
//! enumeration that aggregates them.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{increment, Kernel, PolyFacts};
use super::{poly_gcd, resultant, FieldPoly, OracleError, PrimeField};
use crate::arith::BigRational;

/// True iff `gcd(f, f')` is constant. Constants count as square-free.
pub fn is_squarefree(f: &FieldPoly) -> bool {
    if f.degree().unwrap_or(0) == 0 {
        return true;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f is a polynomial in x^p, hence a p-th power
        return false;
    }
    poly_gcd(f, &d).map(|g| g.degree() == Some(0)).unwrap_or(false)
}

fn require_squarefree(f: &FieldPoly) -> Result<(), OracleError> {
    if !f.is_monic() {
        return Err(OracleError::NotMonic(f.to_string()));
    }
    if !is_squarefree(f) {
        return Err(OracleError::NotSquareFree(f.to_string()));
    }
    Ok(())
}

/// Number of roots in F_p, which for a square-free `f` is the number of
/// linear factors.
pub fn count_linear_factors(f: &FieldPoly) -> Result<usize, OracleError> {
    require_squarefree(f)?;
    Ok((0..f.field().modulus()).filter(|&a| f.eval(a) == 0).count())
}

fn has_root(f: &FieldPoly) -> bool {
    (0..f.field().modulus()).any(|a| f.eval(a) == 0)
}

/// All monic irreducible quadratics over F_p, found as the root-free ones
/// among the `p^2` monic quadratics.
pub fn irreducible_quadratics(field: PrimeField) -> Vec<FieldPoly> {
    let p = field.modulus();
    (0..p * p)
        .map(|i| FieldPoly::monic_from_index(field, 2, i))
        .filter(|g| !has_root(g))
        .collect()
}

fn quadratic_factors<'a>(
    f: &'a FieldPoly,
    quadratics: &'a [FieldPoly],
) -> impl Iterator<Item = &'a FieldPoly> + 'a {
    quadratics
        .iter()
        .filter(move |g| f.rem(g).map(|r| r.is_zero()).unwrap_or(false))
}

/// Number of monic irreducible quadratics dividing a square-free `f`.
pub fn count_irreducible_quadratic_factors(f: &FieldPoly) -> Result<usize, OracleError> {
    require_squarefree(f)?;
    if f.degree().unwrap_or(0) < 2 {
        return Ok(0);
    }
    Ok(quadratic_factors(f, &irreducible_quadratics(f.field())).count())
}

/// Monic irreducible polynomials over F_p of each degree up to a bound,
/// generated by sieving: a monic polynomial is irreducible iff no
/// irreducible of at most half its degree divides it.
#[derive(Debug, Clone)]
pub struct IrreducibleTable {
    field: PrimeField,
    by_degree: Vec<Vec<FieldPoly>>,
}

impl IrreducibleTable {
    pub fn sieve(field: PrimeField, max_degree: usize) -> Self {
        let p = field.modulus();
        let mut by_degree: Vec<Vec<FieldPoly>> = vec![Vec::new(); max_degree + 1];
        for d in 1..=max_degree {
            let count = p.pow(d as u32);
            let found: Vec<FieldPoly> = (0..count)
                .map(|i| FieldPoly::monic_from_index(field, d, i))
                .filter(|g| {
                    by_degree[1..=d / 2]
                        .iter()
                        .flatten()
                        .all(|h| !g.rem(h).unwrap().is_zero())
                })
                .collect();
            by_degree[d] = found;
        }
        IrreducibleTable { field, by_degree }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn of_degree(&self, d: usize) -> &[FieldPoly] {
        self.by_degree.get(d).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// How the number of irreducible factors of a square-free polynomial is
/// obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorCountMethod {
    /// Trial division by sieved irreducibles of degree at most half the
    /// remaining cofactor's degree.
    #[default]
    TrialDivision,
    /// Distinct-degree splitting with `gcd(f, x^(p^k) - x)`.
    DistinctDegree,
}

/// Number of irreducible factors of a square-free `f`, by trial division.
///
/// `table` must reach degree `deg(f) / 2`.
pub fn factor_count_trial(f: &FieldPoly, table: &IrreducibleTable) -> Result<usize, OracleError> {
    require_squarefree(f)?;
    let mut rest = f.clone();
    let mut count = 0;
    let mut d = 1;
    while 2 * d <= rest.degree().unwrap_or(0) {
        if d > table.max_degree() {
            return Err(OracleError::TableTooSmall {
                needed: d,
                have: table.max_degree(),
            });
        }
        for g in table.of_degree(d) {
            if rest.degree().unwrap_or(0) < d {
                break;
            }
            if let Some(quot) = rest.exact_div(g)? {
                rest = quot;
                count += 1;
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        count += 1;
    }
    Ok(count)
}

/// Number of irreducible factors of a square-free `f`, by distinct-degree
/// splitting.
pub fn factor_count_distinct_degree(f: &FieldPoly) -> Result<usize, OracleError> {
    require_squarefree(f)?;
    let field = f.field();
    let p = field.modulus();
    let x = FieldPoly::x(field);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut count = 0;
    let mut k = 1;
    while 2 * k <= rest.degree().unwrap_or(0) {
        h = h.pow_mod(p, &rest)?;
        let g = poly_gcd(&rest, &h.sub(&x))?;
        let dg = g.degree().unwrap();
        if dg > 0 {
            count += dg / k;
            rest = rest.exact_div(&g)?.expect("gcd divides");
            h = h.rem(&rest)?;
        }
        k += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        count += 1;
    }
    Ok(count)
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f')` for monic `f` of degree `n`.
pub fn discriminant(f: &FieldPoly) -> Result<u64, OracleError> {
    let n = f.degree().ok_or(OracleError::ZeroPolynomial)? as u64;
    if !f.is_monic() {
        return Err(OracleError::NotMonic(f.to_string()));
    }
    let field = f.field();
    let d = f.derivative();
    if d.is_zero() {
        return Ok(0);
    }
    let r = resultant(f, &d)?;
    Ok(if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        field.neg(r)
    } else {
        r
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidueClass {
    Residue,
    Nonresidue,
}

/// Whether the discriminant of a square-free monic `f` is a square in
/// F_p^*, by Euler's criterion. Only defined for odd `p`.
pub fn discriminant_class(f: &FieldPoly) -> Result<ResidueClass, OracleError> {
    let field = f.field();
    let p = field.modulus();
    if p == 2 {
        return Err(OracleError::EvenCharacteristic);
    }
    require_squarefree(f)?;
    let disc = discriminant(f)?;
    debug_assert!(disc != 0, "square-free polynomials have nonzero discriminant");
    Ok(if field.pow(disc, (p - 1) / 2) == 1 {
        ResidueClass::Residue
    } else {
        ResidueClass::Nonresidue
    })
}

/// Exact aggregate statistics over all `p^n` monic polynomials of degree
/// `n` over F_p.
///
/// The discriminant counts are zero when `p = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SquareFreeStats {
    pub n: usize,
    pub p: u64,
    pub total_monic: u64,
    pub squarefree_count: u64,
    pub sum_n1: u64,
    /// Sum of `C(n_1, 2)`.
    pub sum_n1_pairs: u64,
    pub sum_n2: u64,
    /// Sum of `(-1)^(number of irreducible factors)`.
    pub mu_sum: i64,
    pub disc_residue: u64,
    pub disc_nonresidue: u64,
    /// Distinct monic irreducible quadratics seen dividing some square-free
    /// polynomial of the enumeration.
    pub distinct_irreducible_quadratics: u64,
}

impl SquareFreeStats {
    fn ratio(&self, num: BigInt) -> BigRational {
        BigRational::new(num, BigInt::from(self.squarefree_count))
    }

    pub fn mean_n1(&self) -> BigRational {
        self.ratio(self.sum_n1.into())
    }

    pub fn mean_n1_pairs(&self) -> BigRational {
        self.ratio(self.sum_n1_pairs.into())
    }

    pub fn mean_n2(&self) -> BigRational {
        self.ratio(self.sum_n2.into())
    }

    /// Mean of `n_2 - C(n_1, 2)`.
    pub fn mean_quad_excess(&self) -> BigRational {
        self.ratio(BigInt::from(self.sum_n2) - BigInt::from(self.sum_n1_pairs))
    }
}

/// Which per-polynomial code path the enumeration uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Buffer-reusing resultant and Frobenius-matrix factor counts.
    #[default]
    Fast,
    /// The public per-polynomial functions of this module: root counting,
    /// division by each irreducible quadratic, and `method` for the number
    /// of factors.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    /// Maximum number of polynomials visited.
    pub budget: u64,
    pub engine: Engine,
    /// Factor counting in the reference engine.
    pub method: FactorCountMethod,
    /// Also run the other engine on every polynomial and fail on any
    /// disagreement.
    pub cross_check: bool,
    pub parallel: bool,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            budget: DEFAULT_BUDGET,
            engine: Engine::Fast,
            method: FactorCountMethod::TrialDivision,
            cross_check: false,
            parallel: true,
        }
    }
}

/// Per-range accumulator; `seen` marks irreducible quadratics by index.
struct Partial {
    stats: SquareFreeStats,
    seen: Vec<bool>,
    unseen: usize,
}

impl Partial {
    fn empty(n: usize, p: u64, quadratics: usize) -> Self {
        Partial {
            stats: SquareFreeStats {
                n,
                p,
                ..Default::default()
            },
            seen: vec![false; quadratics],
            unseen: quadratics,
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        let (a, b) = (&mut self.stats, &other.stats);
        a.total_monic += b.total_monic;
        a.squarefree_count += b.squarefree_count;
        a.sum_n1 += b.sum_n1;
        a.sum_n1_pairs += b.sum_n1_pairs;
        a.sum_n2 += b.sum_n2;
        a.mu_sum += b.mu_sum;
        a.disc_residue += b.disc_residue;
        a.disc_nonresidue += b.disc_nonresidue;
        for (s, o) in self.seen.iter_mut().zip(&other.seen) {
            *s |= *o;
        }
        self.unseen = self.seen.iter().filter(|&&s| !s).count();
        self
    }

    fn record(&mut self, facts: &PolyFacts) {
        let s = &mut self.stats;
        s.squarefree_count += 1;
        s.sum_n1 += facts.n1;
        s.sum_n1_pairs += facts.n1 * facts.n1.saturating_sub(1) / 2;
        s.sum_n2 += facts.n2;
        s.mu_sum += if facts.factors.is_multiple_of(2) { 1 } else { -1 };
        match facts.disc_square {
            Some(true) => s.disc_residue += 1,
            Some(false) => s.disc_nonresidue += 1,
            None => {}
        }
    }

    /// Marks the irreducible quadratics dividing `f`.
    fn mark_quadratics(&mut self, f: &FieldPoly, quadratics: &[FieldPoly]) -> Result<(), OracleError> {
        for (k, g) in quadratics.iter().enumerate() {
            if !self.seen[k] && f.rem(g)?.is_zero() {
                self.seen[k] = true;
                self.unseen -= 1;
            }
        }
        Ok(())
    }
}

struct Context {
    field: PrimeField,
    n: usize,
    quadratics: Vec<FieldPoly>,
    table: IrreducibleTable,
    options: EnumerationOptions,
}

impl Context {
    /// Facts from the public per-polynomial functions.
    fn reference_facts(&self, f: &FieldPoly) -> Result<Option<PolyFacts>, OracleError> {
        if !is_squarefree(f) {
            return Ok(None);
        }
        let n1 = count_linear_factors(f)? as u64;
        let n2 = if self.n >= 2 {
            quadratic_factors(f, &self.quadratics).count() as u64
        } else {
            0
        };
        let factors = match self.options.method {
            FactorCountMethod::TrialDivision => factor_count_trial(f, &self.table)?,
            FactorCountMethod::DistinctDegree => factor_count_distinct_degree(f)?,
        } as u64;
        if self.options.cross_check {
            let other = match self.options.method {
                FactorCountMethod::TrialDivision => factor_count_distinct_degree(f)?,
                FactorCountMethod::DistinctDegree => factor_count_trial(f, &self.table)?,
            } as u64;
            if other != factors {
                return Err(OracleError::MethodDisagreement(f.to_string()));
            }
        }
        let disc_square = if self.field.modulus() == 2 {
            None
        } else {
            Some(discriminant_class(f)? == ResidueClass::Residue)
        };
        Ok(Some(PolyFacts {
            n1,
            n2,
            factors,
            disc_square,
        }))
    }

    fn run_range(&self, range: std::ops::Range<u64>) -> Result<Partial, OracleError> {
        let (n, p) = (self.n, self.field.modulus());
        let mut acc = Partial::empty(n, p, self.quadratics.len());
        let kernel = Kernel::new(self.field, n);
        let mut scratch = kernel.scratch();
        let mut coeffs = FieldPoly::monic_from_index(self.field, n, range.start).coeffs().to_vec();
        for _ in range {
            acc.stats.total_monic += 1;
            let facts = match self.options.engine {
                Engine::Fast => {
                    let fast = kernel.facts(&coeffs, &mut scratch);
                    if self.options.cross_check {
                        let f = FieldPoly::from_reduced(self.field, coeffs.clone());
                        if self.reference_facts(&f)? != fast {
                            return Err(OracleError::MethodDisagreement(f.to_string()));
                        }
                    }
                    fast
                }
                Engine::Reference => {
                    let f = FieldPoly::from_reduced(self.field, coeffs.clone());
                    let reference = self.reference_facts(&f)?;
                    if self.options.cross_check && kernel.facts(&coeffs, &mut scratch) != reference {
                        return Err(OracleError::MethodDisagreement(f.to_string()));
                    }
                    reference
                }
            };
            if let Some(facts) = facts {
                acc.record(&facts);
                if facts.n2 > 0 && acc.unseen > 0 {
                    let f = FieldPoly::from_reduced(self.field, coeffs.clone());
                    acc.mark_quadratics(&f, &self.quadratics)?;
                }
            }
            increment(&mut coeffs[..n], p);
        }
        Ok(acc)
    }
}

/// Visits every monic polynomial of degree `n >= 1` over F_p in
/// lexicographic order of coefficient vectors (constant term fastest) and
/// accumulates [`SquareFreeStats`].
///
/// With `parallel` set, disjoint index ranges are processed concurrently and
/// summed; the result is identical to the sequential run.
pub fn enumerate_stats(
    n: usize,
    p: u64,
    options: &EnumerationOptions,
) -> Result<SquareFreeStats, OracleError> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(OracleError::DegreeZero);
    }
    let total = p
        .checked_pow(n as u32)
        .filter(|&t| t <= options.budget)
        .ok_or_else(|| OracleError::BudgetExceeded {
            n,
            p,
            required: p.checked_pow(n as u32),
            budget: options.budget,
        })?;
    let ctx = Context {
        field,
        n,
        quadratics: irreducible_quadratics(field),
        table: IrreducibleTable::sieve(field, n / 2),
        options: *options,
    };
    let merged = if options.parallel && total > 4096 {
        let chunk = total.div_ceil(256);
        let ranges: Vec<_> = (0..total)
            .step_by(chunk as usize)
            .map(|s| s..(s + chunk).min(total))
            .collect();
        ranges
            .into_par_iter()
            .map(|r| ctx.run_range(r))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .reduce(Partial::merge)
            .expect("at least one range")
    } else {
        ctx.run_range(0..total)?
    };
    let mut stats = merged.stats;
    stats.distinct_irreducible_quadratics = merged.seen.iter().filter(|&&s| s).count() as u64;
    Ok(stats)
}
