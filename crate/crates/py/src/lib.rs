//! Python bindings: exact q-rational functions, the symbolic counts, the
//! finite-field enumeration and the verification runner.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gfcount::arith::{BigRational, RationalFunction};
use gfcount::ffpoly::{self, EnumerationOptions};
use gfcount::report::VerificationReport;
use gfcount::tori::Partition;
use gfcount::verify::{self, ReferenceValues, RunConfig};
use gfcount::{sqfree, tori};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Exact rational function of `q` with rational coefficients.
#[pyclass(name = "RationalFunction", module = "gfcount_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyRationalFunction(RationalFunction);

#[pymethods]
impl PyRationalFunction {
    /// Parses the canonical rendering, e.g. `"(q^2 - q) / (q + 1)"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn q_pow(k: i64) -> Self {
        Self(RationalFunction::q_pow(k))
    }

    /// Exact value at an integer `q`, as a `fractions.Fraction`.
    fn eval(&self, q: i64) -> PyResult<BigRational> {
        self.0.eval_int(q).map_err(value_error)
    }

    fn is_polynomial(&self) -> bool {
        self.0.is_polynomial()
    }

    /// Coefficients of `q^-from, q^-(from+1), ...` in the expansion at infinity.
    fn inverse_q_coefficients(&self, from: i64, len: usize) -> Vec<BigRational> {
        self.0.inverse_q_coefficients(from, len)
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_div(&other.0).map(Self).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RationalFunction('{}')", self.0)
    }
}

type RfResult = PyResult<PyRationalFunction>;

fn wrap(r: gfcount::Result<RationalFunction>) -> RfResult {
    r.map(PyRationalFunction).map_err(value_error)
}

#[pyfunction]
fn squarefree_count(n: usize) -> RfResult {
    wrap(sqfree::squarefree_count(n))
}

#[pyfunction]
fn expected_linear_factors(n: usize) -> RfResult {
    wrap(sqfree::expected_linear_factors(n))
}

#[pyfunction]
fn expected_irreducible_quadratics(n: usize) -> RfResult {
    wrap(sqfree::expected_irreducible_quadratics(n))
}

/// `E[n_2 - C(n_1, 2)]` over square-free polynomials of degree `n`.
#[pyfunction]
fn quad_excess(n: usize) -> RfResult {
    wrap(sqfree::quad_excess_exact(n))
}

#[pyfunction]
fn quad_excess_limit() -> PyRationalFunction {
    PyRationalFunction(sqfree::quad_excess_limit())
}

#[pyfunction]
fn moebius_signed_sum(n: usize) -> RfResult {
    wrap(sqfree::moebius_signed_sum(n))
}

#[pyfunction]
fn partitions(n: usize) -> Vec<Vec<usize>> {
    tori::partitions(n).into_iter().map(|p| p.parts().to_vec()).collect()
}

#[pyfunction]
fn torus_type_count(parts: Vec<usize>) -> RfResult {
    let lambda = Partition::new(parts).ok_or_else(|| value_error("parts must be positive"))?;
    wrap(tori::torus_type_count(&lambda))
}

/// `[(parts, centralizer order, count, probability), ...]` in reverse
/// lexicographic order of partitions.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn type_distribution(
    n: usize,
) -> PyResult<Vec<(Vec<usize>, BigInt, PyRationalFunction, PyRationalFunction)>> {
    let dist = tori::type_distribution(n).map_err(value_error)?;
    Ok(dist
        .into_iter()
        .map(|r| {
            (
                r.partition.parts().to_vec(),
                r.centralizer,
                PyRationalFunction(r.count),
                PyRationalFunction(r.probability),
            )
        })
        .collect())
}

#[pyfunction]
fn total_tori(n: usize) -> RfResult {
    wrap(tori::total_tori(n))
}

#[pyfunction]
fn expected_eigenvectors(n: usize) -> RfResult {
    wrap(tori::expected_eigenvectors(n))
}

#[pyfunction]
fn tori_quad_excess(n: usize) -> RfResult {
    wrap(tori::tori_quad_excess(n))
}

#[pyfunction]
fn tori_quad_excess_limit() -> PyRationalFunction {
    PyRationalFunction(tori::tori_quad_excess_limit())
}

#[pyfunction]
fn mod2_bias(n: usize) -> RfResult {
    wrap(tori::mod2_bias(n))
}

/// Exact statistics over every monic polynomial of degree `n` over F_p.
#[pyfunction]
#[pyo3(signature = (n, p, budget = ffpoly::DEFAULT_BUDGET))]
fn enumerate_stats<'py>(py: Python<'py>, n: usize, p: u64, budget: u64) -> PyResult<Bound<'py, PyDict>> {
    let options = EnumerationOptions {
        budget,
        ..EnumerationOptions::default()
    };
    let s = py
        .detach(|| ffpoly::enumerate_stats(n, p, &options))
        .map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    d.set_item("p", s.p)?;
    d.set_item("total_monic", s.total_monic)?;
    d.set_item("squarefree_count", s.squarefree_count)?;
    d.set_item("sum_n1", s.sum_n1)?;
    d.set_item("sum_n1_pairs", s.sum_n1_pairs)?;
    d.set_item("sum_n2", s.sum_n2)?;
    d.set_item("mu_sum", s.mu_sum)?;
    d.set_item("disc_residue", s.disc_residue)?;
    d.set_item("disc_nonresidue", s.disc_nonresidue)?;
    d.set_item("distinct_irreducible_quadratics", s.distinct_irreducible_quadratics)?;
    d.set_item("mean_n1", s.mean_n1())?;
    d.set_item("mean_n2", s.mean_n2())?;
    d.set_item("mean_quad_excess", s.mean_quad_excess())?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("identity_name", &r.identity_name)?;
    d.set_item("parameters", r.parameters.to_string())?;
    d.set_item("lhs", &r.lhs_rendered)?;
    d.set_item("rhs", &r.rhs_rendered)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// Runs every verification suite and returns the sorted reports as dicts.
#[pyfunction]
#[pyo3(signature = (n_max = 10, primes = vec![2, 3, 5], series_order = 24, budget = ffpoly::DEFAULT_BUDGET))]
fn verify_all<'py>(
    py: Python<'py>,
    n_max: usize,
    primes: Vec<u64>,
    series_order: usize,
    budget: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = RunConfig {
        n_max,
        primes,
        series_order,
        enumeration_budget: budget,
        ..RunConfig::default()
    };
    let reports = py
        .detach(|| verify::verify_all(&config, &ReferenceValues::default()))
        .map_err(value_error)?;
    reports.iter().map(|r| report_dict(py, r)).collect()
}

#[pymodule]
fn gfcount_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRationalFunction>()?;
    m.add_function(wrap_pyfunction!(squarefree_count, m)?)?;
    m.add_function(wrap_pyfunction!(expected_linear_factors, m)?)?;
    m.add_function(wrap_pyfunction!(expected_irreducible_quadratics, m)?)?;
    m.add_function(wrap_pyfunction!(quad_excess, m)?)?;
    m.add_function(wrap_pyfunction!(quad_excess_limit, m)?)?;
    m.add_function(wrap_pyfunction!(moebius_signed_sum, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(torus_type_count, m)?)?;
    m.add_function(wrap_pyfunction!(type_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(total_tori, m)?)?;
    m.add_function(wrap_pyfunction!(expected_eigenvectors, m)?)?;
    m.add_function(wrap_pyfunction!(tori_quad_excess, m)?)?;
    m.add_function(wrap_pyfunction!(tori_quad_excess_limit, m)?)?;
    m.add_function(wrap_pyfunction!(mod2_bias, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_stats, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
