//! Identity suites run by `gfcount verify all`.
//!
//! Each suite returns one [`VerificationReport`] per identity instance.
//! Reference constants that are compared against computed values live in
//! [`ReferenceValues`] so they can be swapped out from a JSON fixture.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{integer, BigRational, RationalFunction};
use crate::ffpoly::{enumerate_stats, EnumerationOptions, IrreducibleTable, PrimeField, SquareFreeStats};
use crate::report::{sort_reports, Params, VerificationReport};
use crate::sqfree::{self, SequenceKind, SequenceTable};
use crate::tori::{self, EulerIdentity};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n_max: usize,
    pub primes: Vec<u64>,
    pub series_order: usize,
    pub enumeration_budget: u64,
    pub output_format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    /// Record wall-clock time in `elapsed_ms`; off keeps reports byte-stable.
    #[serde(default)]
    pub record_timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: 10,
            primes: vec![2, 3, 5],
            series_order: sqfree::DEFAULT_ORDER,
            enumeration_budget: crate::ffpoly::DEFAULT_BUDGET,
            output_format: OutputFormat::Table,
            output_path: None,
            record_timing: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        if self.series_order < self.n_max {
            return Err(Error::Config(format!(
                "series order {} is below n_max {}",
                self.series_order, self.n_max
            )));
        }
        if self.primes.is_empty() {
            return Err(Error::Config("at least one prime is required".into()));
        }
        for &p in &self.primes {
            PrimeField::new(p)?;
        }
        let smallest_n = self.n_max.min(2) as u32;
        let smallest = self.primes.iter().map(|&p| p.saturating_pow(smallest_n)).min().unwrap_or(0);
        if self.enumeration_budget < smallest {
            return Err(Error::Config(format!(
                "budget {} is below the smallest enumeration ({smallest} polynomials)",
                self.enumeration_budget
            )));
        }
        Ok(())
    }

    pub fn enumeration_options(&self) -> EnumerationOptions {
        EnumerationOptions {
            budget: self.enumeration_budget,
            ..EnumerationOptions::default()
        }
    }

    /// Whether degree `n` over `F_p` fits the enumeration budget.
    pub fn within_budget(&self, n: usize, p: u64) -> bool {
        p.checked_pow(n as u32).is_some_and(|t| t <= self.enumeration_budget)
    }

    fn finish(&self, report: VerificationReport, start: Instant) -> VerificationReport {
        if self.record_timing {
            report.timed(start)
        } else {
            report
        }
    }
}

/// Published constants the suites compare against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceValues {
    pub sequence_a_prefix: Vec<i64>,
    pub sequence_b_prefix: Vec<i64>,
    /// Coefficients of `1/q, 1/q^2, ...` in the square-free excess limit.
    pub squarefree_excess_limit_series: Vec<i64>,
    /// Same for the tori excess limit.
    pub tori_excess_limit_series: Vec<i64>,
    pub quad_excess_n2: String,
    pub quad_excess_n3: String,
    pub squarefree_count_n5_q3: i64,
    pub gl2_f2_tori: i64,
    pub gl2_f2_split_tori: i64,
    pub gl2_f2_nonsplit_tori: i64,
    pub eigenvectors_n2_q2: String,
    pub mod2_bias_n2_q2: i64,
}

impl Default for ReferenceValues {
    fn default() -> Self {
        ReferenceValues {
            sequence_a_prefix: vec![1, 3, 4, 4, 5, 7, 8, 8, 9, 11, 12, 12, 13, 15, 16, 16],
            sequence_b_prefix: vec![2, 2, 2, 3, 4, 4, 4, 5, 6, 6, 6, 7, 8, 8, 8, 9, 10, 10, 10],
            squarefree_excess_limit_series: vec![1, -3, 4, -4, 5, -7, 8, -8],
            tori_excess_limit_series: vec![1, 1, 2, 2, 3, 3, 4, 4],
            quad_excess_n2: "0".into(),
            quad_excess_n3: "1 / q".into(),
            squarefree_count_n5_q3: 162,
            gl2_f2_tori: 4,
            gl2_f2_split_tori: 3,
            gl2_f2_nonsplit_tori: 1,
            eigenvectors_n2_q2: "3/2".into(),
            mod2_bias_n2_q2: 2,
        }
    }
}

impl ReferenceValues {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The `a` table used by the finite-n excess formula: generated terms
    /// overlaid with the reference prefix.
    pub fn sequence_a(&self, len: usize) -> SequenceTable {
        SequenceTable::from_generating_function(SequenceKind::A, len).with_prefix(&self.sequence_a_prefix)
    }

    pub fn sequence_b(&self, len: usize) -> SequenceTable {
        SequenceTable::from_generating_function(SequenceKind::B, len).with_prefix(&self.sequence_b_prefix)
    }
}

fn render_list<T: ToString>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn p_n(n: usize) -> Params {
    Params::new().with("n", n)
}

fn p_nq(n: usize, q: u64) -> Params {
    Params::new().with("n", n).with("q", q)
}

/// Runs `f` for each `n` in `range` in parallel, keeping input order.
fn per_n<F>(range: std::ops::RangeInclusive<usize>, f: F) -> Result<Vec<VerificationReport>>
where
    F: Fn(usize) -> Result<Vec<VerificationReport>> + Sync + Send,
{
    let chunks: Vec<_> = range.collect::<Vec<_>>().into_par_iter().map(&f).collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Square-free identities in Q(q) for `2 <= n <= series_order`.
pub fn sqfree_suite(config: &RunConfig, refs: &ReferenceValues) -> Result<Vec<VerificationReport>> {
    let order = config.series_order;
    let mut out = Vec::new();

    let start = Instant::now();
    out.push(config.finish(sqfree::factorization_identity_check(order)?, start));

    let start = Instant::now();
    let product = sqfree::squarefree_series(order)?;
    let closed = sqfree::squarefree_closed_series(order)?;
    for n in 0..=order {
        out.push(config.finish(
            VerificationReport::compare(
                "squarefree-count",
                p_n(n),
                product.coefficient(n)?,
                sqfree::squarefree_count_closed_form(n),
            ),
            start,
        ));
        out.push(VerificationReport::compare(
            "squarefree-count-closed-series",
            p_n(n),
            closed.coefficient(n)?,
            sqfree::squarefree_count_closed_form(n),
        ));
    }

    let mobius = sqfree::moebius_series(order)?;
    for n in 0..=order {
        out.push(VerificationReport::compare(
            "mobius-signed-sum",
            p_n(n),
            mobius.coefficient(n)?,
            sqfree::moebius_closed_form(n),
        ));
    }

    let excess = sqfree::quad_excess_series(order)?;
    let table_len = order.saturating_sub(3).max(1);
    let a = refs.sequence_a(table_len);
    let b = refs.sequence_b(table_len);
    out.extend(per_n(2..=order, |n| {
        let start = Instant::now();
        let exact = excess.coefficient(n)?;
        let mut rs = vec![
            config.finish(
                VerificationReport::compare(
                    "expected-linear-factors",
                    p_n(n),
                    &sqfree::expected_linear_factors_partial_sum(n)?,
                    &sqfree::expected_linear_factors(n)?,
                ),
                start,
            ),
            VerificationReport::compare(
                "quad-excess-moments",
                p_n(n),
                &(&sqfree::expected_irreducible_quadratics(n)? - &sqfree::expected_linear_pairs(n)?),
                exact,
            ),
        ];
        let start = Instant::now();
        let report = match sqfree::quad_excess_formula_with(n, &a, &b) {
            Ok(formula) => VerificationReport::compare("quad-excess-finite-n", p_n(n), &formula, exact),
            Err(e) => VerificationReport::failure("quad-excess-finite-n", p_n(n), e),
        };
        rs.push(config.finish(report, start));
        Ok(rs)
    })?);

    out.push(VerificationReport::compare(
        "quad-excess-special-case",
        p_n(2),
        excess.coefficient(2)?,
        &refs.quad_excess_n2,
    ));
    out.push(VerificationReport::compare(
        "quad-excess-special-case",
        p_n(3),
        excess.coefficient(3)?,
        &refs.quad_excess_n3,
    ));

    let a_len = refs.sequence_a_prefix.len();
    out.push(VerificationReport::compare(
        "sequence-a-prefix",
        Params::new().with("terms", a_len),
        render_list(SequenceTable::from_generating_function(SequenceKind::A, a_len).values()),
        render_list(&refs.sequence_a_prefix),
    ));
    let b_len = refs.sequence_b_prefix.len();
    out.push(VerificationReport::compare(
        "sequence-b-prefix",
        Params::new().with("terms", b_len),
        render_list(SequenceTable::from_generating_function(SequenceKind::B, b_len).values()),
        render_list(&refs.sequence_b_prefix),
    ));

    let len = refs.squarefree_excess_limit_series.len();
    out.push(VerificationReport::compare(
        "quad-excess-limit-expansion",
        Params::new().with("terms", len),
        render_list(&sqfree::quad_excess_limit().inverse_q_coefficients(1, len)),
        render_list(&refs.squarefree_excess_limit_series),
    ));
    Ok(out)
}

/// Exhaustive statistics for every `(p, n)` with `2 <= n <= n_max` and
/// `p^n` within budget, in prime-then-degree order.
pub fn oracle_grid(config: &RunConfig) -> Result<Vec<SquareFreeStats>> {
    let opts = config.enumeration_options();
    let mut out = Vec::new();
    for &p in &config.primes {
        for n in 2..=config.n_max {
            if config.within_budget(n, p) {
                out.push(enumerate_stats(n, p, &opts)?);
            }
        }
    }
    Ok(out)
}

fn eval(f: &RationalFunction, p: u64) -> Result<BigRational> {
    Ok(f.eval_int(p as i64)?)
}

/// Compares one oracle run against the symbolic expectations at `q = p`.
pub fn oracle_reports(stats: &SquareFreeStats) -> Result<Vec<VerificationReport>> {
    let (n, p) = (stats.n, stats.p);
    let params = || p_nq(n, p);
    let mut out = vec![
        VerificationReport::compare(
            "oracle-squarefree-count",
            params(),
            stats.squarefree_count,
            eval(&sqfree::squarefree_count_closed_form(n), p)?,
        ),
        VerificationReport::compare(
            "oracle-expected-linear-factors",
            params(),
            stats.mean_n1(),
            eval(&sqfree::expected_linear_factors_partial_sum(n)?, p)?,
        ),
        VerificationReport::compare(
            "oracle-expected-linear-pairs",
            params(),
            stats.mean_n1_pairs(),
            eval(&sqfree::expected_linear_pairs(n)?, p)?,
        ),
        VerificationReport::compare(
            "oracle-expected-irreducible-quadratics",
            params(),
            stats.mean_n2(),
            eval(&sqfree::expected_irreducible_quadratics(n)?, p)?,
        ),
        VerificationReport::compare(
            "oracle-quad-excess",
            params(),
            stats.mean_quad_excess(),
            eval(&sqfree::quad_excess_exact(n)?, p)?,
        ),
        VerificationReport::compare(
            "oracle-mobius-signed-sum",
            params(),
            stats.mu_sum,
            eval(&sqfree::moebius_closed_form(n), p)?,
        ),
        VerificationReport::compare(
            "oracle-irreducible-quadratics-seen",
            params(),
            stats.distinct_irreducible_quadratics,
            eval(&sqfree::count_irreducibles(2), p)?,
        ),
    ];
    if p != 2 {
        out.push(VerificationReport::compare(
            "oracle-discriminant-balance",
            params(),
            stats.disc_residue,
            stats.disc_nonresidue,
        ));
    }
    Ok(out)
}

/// Brute-force checks over each configured prime.
pub fn oracle_suite(config: &RunConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &p in &config.primes {
        let field = PrimeField::new(p)?;
        let table = IrreducibleTable::sieve(field, 4);
        for d in 1..=4 {
            out.push(VerificationReport::compare(
                "oracle-irreducible-count",
                Params::new().with("d", d).with("q", p),
                table.of_degree(d).len(),
                eval(&sqfree::count_irreducibles(d), p)?,
            ));
        }
    }
    let opts = config.enumeration_options();
    for &p in &config.primes {
        for n in 2..=config.n_max {
            if !config.within_budget(n, p) {
                continue;
            }
            let start = Instant::now();
            let stats = enumerate_stats(n, p, &opts)?;
            let reports = oracle_reports(&stats)?;
            let elapsed_owner = reports.len().saturating_sub(1);
            for (i, r) in reports.into_iter().enumerate() {
                out.push(if i == elapsed_owner { config.finish(r, start) } else { r });
            }
        }
    }
    Ok(out)
}

/// Tori identities for `1 <= n <= n_max`.
pub fn tori_suite(config: &RunConfig, refs: &ReferenceValues) -> Result<Vec<VerificationReport>> {
    let n_max = config.n_max;
    let mut out = Vec::new();
    for which in [EulerIdentity::Inverse, EulerIdentity::Direct] {
        let start = Instant::now();
        out.push(config.finish(tori::euler_identity_check(which, n_max)?, start));
    }
    out.extend(per_n(1..=n_max, |n| {
        let start = Instant::now();
        let dist = tori::type_distribution(n)?;
        let total = dist.iter().fold(RationalFunction::zero(), |acc, r| &acc + &r.count);
        let prob_sum = dist.iter().fold(RationalFunction::zero(), |acc, r| &acc + &r.probability);
        let closed_total = tori::total_tori_closed_form(n);
        let probs: Vec<String> = dist.iter().map(|r| r.probability.to_string()).collect();
        let formula: Vec<String> = dist
            .iter()
            .map(|r| tori::type_probability_formula(&r.partition).map(|f| f.to_string()))
            .collect::<Result<_>>()?;
        let ones = vec![integer(1); n];
        let mut rs = vec![
            config.finish(VerificationReport::compare("tori-total", p_n(n), &total, &closed_total), start),
            VerificationReport::compare(
                "tori-total-cycle-index",
                p_n(n),
                &tori::cycle_index_coefficient(n, &ones)?,
                &closed_total,
            ),
            VerificationReport::compare("cayley-identity", p_n(n), &prob_sum, "1"),
            VerificationReport::compare(
                "tori-type-probabilities",
                p_n(n),
                render_list(&probs),
                render_list(&formula),
            ),
            VerificationReport::compare(
                "tori-irreducible-type",
                p_n(n),
                &dist[0].count,
                &tori::irreducible_tori_count(n)?,
            ),
        ];
        let closed = tori::expected_eigenvectors(n)?;
        rs.push(VerificationReport::compare(
            "eigenvectors-partition-sum",
            p_n(n),
            &tori::expected_eigenvectors_partition_sum(n)?,
            &closed,
        ));
        rs.push(VerificationReport::compare(
            "eigenvectors-series",
            p_n(n),
            &tori::expected_eigenvectors_series(n)?,
            &closed,
        ));
        let bias = tori::mod2_bias_closed_form(n);
        rs.push(VerificationReport::compare("mod2-bias", p_n(n), &tori::mod2_bias(n)?, &bias));
        rs.push(VerificationReport::compare(
            "mod2-bias-cycle-index",
            p_n(n),
            &tori::mod2_bias_series(n)?,
            &bias,
        ));
        rs.push(VerificationReport::compare(
            "mod2-bias-euler",
            p_n(n),
            &tori::mod2_bias_euler(n)?,
            &bias,
        ));
        if n >= 2 {
            rs.push(VerificationReport::compare(
                "tori-quad-excess",
                p_n(n),
                &tori::tori_quad_excess_partition_sum(n)?,
                &tori::tori_quad_excess(n)?,
            ));
            let fir = tori::expected_linear_pairs(n)?;
            rs.push(VerificationReport::compare(
                "tori-linear-pairs",
                p_n(n),
                &tori::expected_linear_pairs_partition_sum(n)?,
                &fir,
            ));
            rs.push(VerificationReport::compare(
                "tori-linear-pairs-series",
                p_n(n),
                &tori::expected_linear_pairs_series(n)?,
                &fir,
            ));
            let sec = tori::expected_quadratic_subtori(n)?;
            rs.push(VerificationReport::compare(
                "tori-quadratic-subtori",
                p_n(n),
                &tori::expected_quadratic_subtori_partition_sum(n)?,
                &sec,
            ));
            rs.push(VerificationReport::compare(
                "tori-quadratic-subtori-series",
                p_n(n),
                &tori::expected_quadratic_subtori_series(n)?,
                &sec,
            ));
        }
        Ok(rs)
    })?);

    let len = refs.tori_excess_limit_series.len();
    out.push(VerificationReport::compare(
        "tori-quad-excess-limit-expansion",
        Params::new().with("terms", len),
        render_list(&tori::tori_quad_excess_limit().inverse_q_coefficients(1, len)),
        render_list(&refs.tori_excess_limit_series),
    ));
    Ok(out)
}

/// Spot values at small `(n, q)`.
pub fn reference_suite(refs: &ReferenceValues) -> Result<Vec<VerificationReport>> {
    let d2 = tori::type_distribution(2)?;
    let at2 = |f: &RationalFunction| eval(f, 2);
    let split = d2.iter().find(|r| r.partition.length() == 2).expect("type (1,1)");
    let nonsplit = d2.iter().find(|r| r.partition.length() == 1).expect("type (2)");
    Ok(vec![
        VerificationReport::compare(
            "squarefree-count-value",
            p_nq(5, 3),
            eval(&sqfree::squarefree_count(5)?, 3)?,
            refs.squarefree_count_n5_q3,
        ),
        VerificationReport::compare("tori-total-value", p_nq(2, 2), at2(&tori::total_tori(2)?)?, refs.gl2_f2_tori),
        VerificationReport::compare(
            "tori-type-count-value",
            p_nq(2, 2).with("type", split.partition.to_string()),
            at2(&split.count)?,
            refs.gl2_f2_split_tori,
        ),
        VerificationReport::compare(
            "tori-type-count-value",
            p_nq(2, 2).with("type", nonsplit.partition.to_string()),
            at2(&nonsplit.count)?,
            refs.gl2_f2_nonsplit_tori,
        ),
        VerificationReport::compare(
            "eigenvectors-value",
            p_nq(2, 2),
            at2(&tori::expected_eigenvectors(2)?)?,
            &refs.eigenvectors_n2_q2,
        ),
        VerificationReport::compare("mod2-bias-value", p_nq(2, 2), at2(&tori::mod2_bias(2)?)?, refs.mod2_bias_n2_q2),
    ])
}

/// Every suite, sorted by identity name then parameters.
pub fn verify_all(config: &RunConfig, refs: &ReferenceValues) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    let (sq, (orc, (to, rf))) = rayon::join(
        || sqfree_suite(config, refs),
        || {
            rayon::join(
                || oracle_suite(config),
                || rayon::join(|| tori_suite(config, refs), || reference_suite(refs)),
            )
        },
    );
    let mut reports = sq?;
    reports.extend(orc?);
    reports.extend(to?);
    reports.extend(rf?);
    if !config.record_timing {
        reports.iter_mut().for_each(|r| r.elapsed_ms = 0);
    }
    sort_reports(&mut reports);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            n_max: 4,
            primes: vec![2, 3],
            series_order: 6,
            ..RunConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad_order = RunConfig { series_order: 3, ..small() };
        assert!(matches!(bad_order.validate(), Err(Error::Config(_))));
        let bad_prime = RunConfig { primes: vec![4], ..small() };
        assert!(bad_prime.validate().is_err());
        let bad_budget = RunConfig { enumeration_budget: 3, ..small() };
        assert!(bad_budget.validate().is_err());
        assert!(RunConfig { primes: vec![], ..small() }.validate().is_err());
    }

    #[test]
    fn small_run_passes() {
        let reports = verify_all(&small(), &ReferenceValues::default()).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(reports.iter().all(|r| r.elapsed_ms == 0));
    }

    #[test]
    fn corrupted_sequence_fails_formula() {
        let mut refs = ReferenceValues::default();
        refs.sequence_a_prefix[2] = 5;
        let reports = verify_all(&small(), &refs).unwrap();
        let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.identity_name.as_str()).collect();
        assert!(failed.contains(&"quad-excess-finite-n"));
        assert!(failed.contains(&"sequence-a-prefix"));
    }

    #[test]
    fn fixture_parsing() {
        let refs = ReferenceValues::from_json(r#"{"gl2_f2_tori": 5}"#).unwrap();
        assert_eq!(refs.gl2_f2_tori, 5);
        assert_eq!(refs.sequence_a_prefix, ReferenceValues::default().sequence_a_prefix);
        assert!(ReferenceValues::from_json(r#"{"unknown": 1}"#).is_err());
    }
}
