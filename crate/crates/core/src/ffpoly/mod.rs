//! Brute-force ground truth over prime fields: every monic polynomial of a
//! given degree is visited and its factor statistics are tallied exactly.

mod field;
mod kernel;
mod oracle;
mod poly;

pub use field::PrimeField;
pub use oracle::{
    count_irreducible_quadratic_factors, count_linear_factors, discriminant, discriminant_class,
    enumerate_stats, factor_count_distinct_degree, factor_count_trial, irreducible_quadratics,
    is_squarefree, Engine, EnumerationOptions, FactorCountMethod, IrreducibleTable, ResidueClass,
    SquareFreeStats, DEFAULT_BUDGET,
};
pub use poly::{poly_gcd, resultant, FieldPoly};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside 2 <= p < 2^31")]
    ModulusOutOfRange(u64),
    #[error("polynomials over F_{0} and F_{1} cannot be combined")]
    FieldMismatch(u64, u64),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("{0} is not monic")]
    NotMonic(String),
    #[error("{0} is not square-free")]
    NotSquareFree(String),
    #[error("discriminant residue classes need odd p")]
    EvenCharacteristic,
    #[error("enumeration needs degree n >= 1")]
    DegreeZero,
    #[error(
        "enumerating degree {n} over F_{p} needs {} visits, budget is {budget}",
        required.map(|r| r.to_string()).unwrap_or_else(|| "more than 2^64".into())
    )]
    BudgetExceeded {
        n: usize,
        p: u64,
        required: Option<u64>,
        budget: u64,
    },
    #[error("irreducible table reaches degree {have}, degree {needed} needed")]
    TableTooSmall { needed: usize, have: usize },
    #[error("factor-count methods disagree on {0}")]
    MethodDisagreement(String),
}
