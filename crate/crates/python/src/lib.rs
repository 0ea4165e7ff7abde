//! Python module `wtp`.
//!
//! Functions take plain lists and return floats; `run` takes a JSON config
//! and returns the JSON report the `wtp` binary would print.

// pyo3 0.22's `#[pyfunction]` expansion trips this lint
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wtp_core::cli::{self, Command};
use wtp_core::estimator::{entropy_estimate, EstimatorOptions};
use wtp_core::sponge::{self, kp_recursion};
use wtp_core::weights::exponents_from_bases;
use wtp_core::{Chain, DigitSystem, Error, Exponents};

fn py_err(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn system(bases: Vec<u32>, digits: Vec<Vec<u32>>) -> PyResult<DigitSystem> {
    DigitSystem::new(bases, digits).map_err(py_err)
}

fn exponents(sys: &DigitSystem, a: Option<Vec<f64>>) -> PyResult<Exponents> {
    match a {
        None => exponents_from_bases(sys.bases()).map_err(py_err),
        Some(a) => {
            let a = Exponents::new(a).map_err(py_err)?;
            a.check_rank(sys.rank()).map_err(py_err)?;
            Ok(a)
        }
    }
}

/// Hausdorff dimension of the sponge with the given bases and digit set.
#[pyfunction]
fn hausdorff_dimension(bases: Vec<u32>, digits: Vec<Vec<u32>>) -> PyResult<f64> {
    sponge::hausdorff_dimension(&system(bases, digits)?).map_err(py_err)
}

#[pyfunction]
fn minkowski_dimension(bases: Vec<u32>, digits: Vec<Vec<u32>>) -> PyResult<f64> {
    Ok(sponge::minkowski_dimension(&system(bases, digits)?))
}

/// Weighted entropy in nats. Exponents default to the ones derived from the bases.
#[pyfunction]
#[pyo3(signature = (bases, digits, exponents=None))]
fn weighted_entropy(bases: Vec<u32>, digits: Vec<Vec<u32>>, exponents: Option<Vec<f64>>) -> PyResult<f64> {
    let sys = system(bases, digits)?;
    let a = self::exponents(&sys, exponents)?;
    Ok(kp_recursion(&sys, &a, None).map_err(py_err)?.z0().ln())
}

/// `[(N, log S_N / N), ...]` for N up to `n_max`.
#[pyfunction]
#[pyo3(signature = (bases, digits, n_max, exponents=None))]
fn estimate(
    bases: Vec<u32>,
    digits: Vec<Vec<u32>>,
    n_max: usize,
    exponents: Option<Vec<f64>>,
) -> PyResult<Vec<(usize, f64)>> {
    let sys = system(bases, digits)?;
    let a = self::exponents(&sys, exponents)?;
    let chain = Chain::sponge(sys);
    let series = entropy_estimate(&chain, &a, None, n_max, &EstimatorOptions::default()).map_err(py_err)?;
    Ok(series.entries)
}

/// Runs a `wtp` command on a JSON config string and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (command, config, n_max=None))]
fn run(py: Python<'_>, command: &str, config: &str, n_max: Option<usize>) -> PyResult<String> {
    let command: Command = command.parse().map_err(py_err)?;
    let mut cfg = cli::parse_config(config, "<string>").map_err(py_err)?;
    if let Some(n) = n_max {
        cfg = cfg.with_n_max(n).map_err(py_err)?;
    }
    let report = py.allow_threads(|| cli::run(&cfg, command)).map_err(py_err)?;
    Ok(report.to_json())
}

#[pymodule]
fn wtp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hausdorff_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(minkowski_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
