use gfcount::arith::{BigRational, RationalFunction};
use gfcount::ffpoly::{
    enumerate_stats, Engine, EnumerationOptions, FactorCountMethod, IrreducibleTable, PrimeField,
    SquareFreeStats,
};
use gfcount::sqfree;

fn at(f: &RationalFunction, q: u64) -> BigRational {
    f.eval_int(q as i64).unwrap()
}

fn grid() -> impl Iterator<Item = (u64, usize)> {
    [(2u64, 10usize), (3, 7), (5, 5)]
        .into_iter()
        .flat_map(|(p, top)| (2..=top).map(move |n| (p, n)))
}

fn check(stats: &SquareFreeStats) {
    let (n, q) = (stats.n, stats.p);
    let ctx = format!("n={n} q={q}");
    assert_eq!(stats.total_monic, q.pow(n as u32), "{ctx}");
    assert_eq!(
        BigRational::from_integer(stats.squarefree_count.into()),
        at(&sqfree::squarefree_count(n).unwrap(), q),
        "{ctx}"
    );
    assert_eq!(stats.mean_n1(), at(&sqfree::expected_linear_factors(n).unwrap(), q), "{ctx}");
    assert_eq!(stats.mean_n1_pairs(), at(&sqfree::expected_linear_pairs(n).unwrap(), q), "{ctx}");
    assert_eq!(
        stats.mean_n2(),
        at(&sqfree::expected_irreducible_quadratics(n).unwrap(), q),
        "{ctx}"
    );
    assert_eq!(stats.mean_quad_excess(), at(&sqfree::quad_excess_exact(n).unwrap(), q), "{ctx}");
    assert_eq!(
        BigRational::from_integer(stats.mu_sum.into()),
        at(&sqfree::moebius_signed_sum(n).unwrap(), q),
        "{ctx}"
    );
    if q > 2 {
        assert_eq!(stats.disc_residue, stats.disc_nonresidue, "{ctx}");
        assert_eq!(stats.disc_residue + stats.disc_nonresidue, stats.squarefree_count, "{ctx}");
    }
    if n >= 4 {
        assert_eq!(stats.distinct_irreducible_quadratics, (q * q - q) / 2, "{ctx}");
    }
}

#[test]
fn fast_engine_matches_symbolic() {
    for (p, n) in grid() {
        check(&enumerate_stats(n, p, &EnumerationOptions::default()).unwrap());
    }
}

#[test]
fn reference_engine_matches_symbolic() {
    for method in [FactorCountMethod::TrialDivision, FactorCountMethod::DistinctDegree] {
        let options = EnumerationOptions {
            engine: Engine::Reference,
            method,
            ..EnumerationOptions::default()
        };
        for (p, n) in [(2, 7), (3, 5), (5, 4)] {
            check(&enumerate_stats(n, p, &options).unwrap());
        }
    }
}

#[test]
fn cross_checked_sequential_run_matches_parallel() {
    let checked = EnumerationOptions {
        cross_check: true,
        parallel: false,
        ..EnumerationOptions::default()
    };
    for (p, n) in [(2, 8), (3, 6), (7, 3)] {
        let a = enumerate_stats(n, p, &checked).unwrap();
        let b = enumerate_stats(n, p, &EnumerationOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn sieve_counts_irreducibles() {
    for (p, top) in [(2u64, 8usize), (3, 5), (5, 3)] {
        let table = IrreducibleTable::sieve(PrimeField::new(p).unwrap(), top);
        for d in 1..=top {
            let expect = at(&sqfree::count_irreducibles(d), p);
            assert_eq!(BigRational::from_integer(table.of_degree(d).len().into()), expect, "d={d} q={p}");
        }
    }
}

#[test]
fn budget_is_enforced() {
    let options = EnumerationOptions {
        budget: 100,
        ..EnumerationOptions::default()
    };
    assert!(enumerate_stats(7, 2, &options).is_err());
    assert!(enumerate_stats(6, 2, &options).is_ok());
}
