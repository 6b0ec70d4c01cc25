//! Python module `pfl`: families, predicates, inequalities and exact search.
//!
//! Structured results come back as plain dicts (the same shape as the CLI's
//! JSON); exact rationals inside them are `[numerator, denominator]` pairs,
//! while top-level inequality sides are `fractions.Fraction`.

use std::time::Duration;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use pfl_core::cyclic::{build_arcs3, expectation_check, injection_certificate, CyclicPerm};
use pfl_core::extremal::{p_exact as core_p_exact, EdgeConvention, SearchOptions};
use pfl_core::inequalities::{self as ineq, IneqReport};
use pfl_core::predicates;
use pfl_core::{Error, Family, GroundSet, Rational};

create_exception!(pfl, HypothesisError, PyException, "An input does not satisfy a required hypothesis.");
create_exception!(pfl, ViolationError, PyException, "A checked claim failed on a valid input.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::HypothesisViolated { .. } => HypothesisError::new_err(e.to_string()),
        Error::Violation { .. } => ViolationError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for Result<T, Error> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let num: num_bigint::BigInt = r.numer().clone();
    let den: num_bigint::BigInt = r.denom().clone();
    py.import("fractions")?.getattr("Fraction")?.call1((num, den))
}

fn report<'py>(py: Python<'py>, r: &IneqReport) -> PyResult<Bound<'py, PyAny>> {
    let d = to_py(py, r)?;
    d.set_item("lhs", fraction(py, &r.lhs)?)?;
    d.set_item("rhs", fraction(py, &r.rhs)?)?;
    d.set_item("slack", fraction(py, &r.slack)?)?;
    Ok(d)
}

/// A family of distinct subsets of `[n]`; sets are lists of 1-based elements.
#[pyclass(name = "Family", module = "pfl", frozen)]
pub struct PyFamily(Family);

#[pymethods]
impl PyFamily {
    #[new]
    fn new(n: usize, sets: Vec<Vec<usize>>) -> PyResult<Self> {
        let g = GroundSet::new(n).py()?;
        let sets = sets.iter().map(|s| g.set_from_elements(s.iter().copied())).collect::<Result<Vec<_>, _>>().py()?;
        Ok(PyFamily(Family::new(g, sets).py()?))
    }

    /// Parses the JSON or plain-text file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyFamily(pfl_core::parse_family(text).py()?))
    }

    /// `{G ⊆ [n] : |G| >= m}`.
    #[staticmethod]
    fn up_set(n: usize, m: usize) -> PyResult<Self> {
        Ok(PyFamily(Family::up_set(GroundSet::new(n).py()?, m)))
    }

    /// All sets whose size is in `sizes`.
    #[staticmethod]
    fn layers(n: usize, sizes: Vec<usize>) -> PyResult<Self> {
        Ok(PyFamily(Family::layers(GroundSet::new(n).py()?, &sizes)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.ground().n()
    }

    fn sets(&self) -> Vec<Vec<usize>> {
        self.0.sets().map(|s| s.to_vec()).collect()
    }

    /// Layer sizes `|F ∩ C([n], j)|` for `j = 0..n`.
    fn profile(&self) -> Vec<u64> {
        self.0.profile().counts().to_vec()
    }

    fn complement(&self) -> Self {
        PyFamily(self.0.complement())
    }

    fn to_json(&self) -> String {
        pfl_core::serialize_family(&self.0)
    }

    fn to_text(&self) -> String {
        pfl_core::setcore::serialize_family_text(&self.0)
    }

    fn is_partition_free(&self, k: usize) -> bool {
        predicates::is_k_partition_free(&self.0, k)
    }

    /// No `k` pairwise disjoint members.
    fn is_dependent(&self, k: usize) -> bool {
        predicates::is_k_dependent(&self.0, k)
    }

    /// A `k`-partition of `[n]` drawn from the family, or `None`.
    fn partition_witness(&self, k: usize) -> Option<Vec<Vec<usize>>> {
        predicates::partition_witness(&self.0, k).map(|w| w.tuple.iter().map(|s| s.to_vec()).collect())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, set: Vec<usize>) -> bool {
        self.0.ground().set_from_elements(set).is_ok_and(|s| self.0.contains(s))
    }

    fn __eq__(&self, other: PyRef<'_, PyFamily>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Family(n={}, sets={:?})", self.n(), self.sets())
    }
}

fn unwrap_all<'a>(fams: &'a [PyRef<'_, PyFamily>]) -> Vec<&'a Family> {
    fams.iter().map(|f| &f.0).collect()
}

#[pyfunction]
fn is_cross_partition_free(families: Vec<PyRef<'_, PyFamily>>) -> PyResult<bool> {
    predicates::is_cross_partition_free(&unwrap_all(&families)).py()
}

#[pyfunction]
#[pyo3(signature = (family, sizes, check = true))]
fn profile_inequality<'py>(py: Python<'py>, family: PyRef<'py, PyFamily>, sizes: Vec<usize>, check: bool) -> PyResult<Bound<'py, PyAny>> {
    report(py, &ineq::profile_report(&family.0, &sizes, check).py()?)
}

#[pyfunction]
#[pyo3(signature = (family, m, l, check = true))]
fn three_layer<'py>(py: Python<'py>, family: PyRef<'py, PyFamily>, m: usize, l: usize, check: bool) -> PyResult<Bound<'py, PyAny>> {
    report(py, &ineq::three_layer_report(&family.0, m, l, check).py()?)
}

#[pyfunction]
#[pyo3(signature = (families, m, l, check = true))]
fn cross_layer<'py>(py: Python<'py>, families: Vec<PyRef<'py, PyFamily>>, m: usize, l: usize, check: bool) -> PyResult<Bound<'py, PyAny>> {
    report(py, &ineq::cross_layer_report(&unwrap_all(&families), m, l, check).py()?)
}

#[pyfunction]
#[pyo3(signature = (families, check = true))]
fn cross_sum<'py>(py: Python<'py>, families: Vec<PyRef<'py, PyFamily>>, check: bool) -> PyResult<Bound<'py, PyAny>> {
    report(py, &ineq::cross_sum_bound_check(&unwrap_all(&families), check).py()?)
}

/// Enumerates every ordered partition with the given block sizes.
#[pyfunction]
fn tuple_audit<'py>(py: Python<'py>, family: PyRef<'py, PyFamily>, sizes: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ineq::kleitman_tuple_audit(&family.0, &sizes).py()?)
}

/// `sum_{j >= m} C(km - 1, j)`.
#[pyfunction]
fn up_set_bound(k: usize, m: usize) -> BigUint {
    ineq::up_set_bound(k, m)
}

#[pyfunction]
#[pyo3(signature = (k, m, alternative = false))]
fn derive<'py>(py: Python<'py>, k: usize, m: usize, alternative: bool) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ineq::derive_combined_with(k, m, alternative).py()?)
}

#[pyfunction]
fn ratio_identity<'py>(py: Python<'py>, k: usize, m: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ineq::ratio_identity(k, m, j).py()?)
}

/// Exact `p(n, k)`. Returns the search result as a dict; `proven` is false if
/// the budget ran out.
#[pyfunction]
#[pyo3(signature = (n, k, prove_unique = false, budget_seconds = 300.0, allow_empty_block = true))]
fn p_exact<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    prove_unique: bool,
    budget_seconds: f64,
    allow_empty_block: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let convention = if allow_empty_block { EdgeConvention::WithEmptyBlock } else { EdgeConvention::NonEmptyOnly };
    let opts = SearchOptions { prove_unique, budget: Some(Duration::from_secs_f64(budget_seconds)), convention };
    let r = py.detach(|| core_p_exact(n, k, opts)).py()?;
    to_py(py, &r)
}

/// Injection certificate for one cyclic order (`order` is a permutation of 1..n; default identity).
#[pyfunction]
#[pyo3(signature = (family, m, l, order = None))]
fn injection<'py>(
    py: Python<'py>,
    family: PyRef<'py, PyFamily>,
    m: usize,
    l: usize,
    order: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let g = family.0.ground();
    let perm = match order {
        Some(o) => CyclicPerm::from_order(g, &o).py()?,
        None => CyclicPerm::identity(g),
    };
    let cert = injection_certificate(&family.0, &build_arcs3(&perm, m, l).py()?).py()?;
    let d = to_py(py, &cert)?;
    d.set_item("valid", cert.validate())?;
    Ok(d)
}

/// Exhaustive averages over cyclic orders against the closed forms.
#[pyfunction]
fn expectation<'py>(py: Python<'py>, family: PyRef<'py, PyFamily>, k: usize, m: usize, l: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &expectation_check(&family.0, k, m, l).py()?)
}

#[pymodule]
fn pfl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add("HypothesisError", m.py().get_type::<HypothesisError>())?;
    m.add("ViolationError", m.py().get_type::<ViolationError>())?;
    m.add_function(wrap_pyfunction!(is_cross_partition_free, m)?)?;
    m.add_function(wrap_pyfunction!(profile_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(three_layer, m)?)?;
    m.add_function(wrap_pyfunction!(cross_layer, m)?)?;
    m.add_function(wrap_pyfunction!(cross_sum, m)?)?;
    m.add_function(wrap_pyfunction!(tuple_audit, m)?)?;
    m.add_function(wrap_pyfunction!(up_set_bound, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_identity, m)?)?;
    m.add_function(wrap_pyfunction!(p_exact, m)?)?;
    m.add_function(wrap_pyfunction!(injection, m)?)?;
    m.add_function(wrap_pyfunction!(expectation, m)?)?;
    Ok(())
}
