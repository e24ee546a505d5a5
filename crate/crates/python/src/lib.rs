//! Python bindings. Scalars cross the boundary as exact strings (`"p/q"` or the π² form).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tesstopo::complex;
use tesstopo::feasibility;
use tesstopo::io;
use tesstopo::{catalog, Error, Scalar, TessParams};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params_from_dict(d: &Bound<'_, PyDict>) -> PyResult<TessParams> {
    let mut pairs = Vec::new();
    for (k, v) in d.iter() {
        let key: String = k.extract()?;
        let value = Scalar::parse(&v.str()?.to_string()).map_err(|e| py_err(e.into()))?;
        pairs.push((key, value));
    }
    io::params_from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.clone()))).map_err(py_err)
}

fn named_dict<'py, K: AsRef<str>>(
    py: Python<'py>,
    items: impl IntoIterator<Item = (K, Scalar)>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (k, v) in items {
        d.set_item(k.as_ref(), v.render())?;
    }
    Ok(d)
}

fn params_dict<'py>(py: Python<'py>, p: &TessParams) -> PyResult<Bound<'py, PyDict>> {
    named_dict(py, p.named().into_iter().map(|(k, v)| (k, v.clone())))
}

/// Intensities and mean adjacencies for a parameter dict such as `{"VE": 6, "EP": 4, ...}`.
#[pyfunction]
fn derive<'py>(py: Python<'py>, params: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyDict>> {
    let s = tesstopo::derive(&params_from_dict(params)?).map_err(py_err)?;
    named_dict(py, s.named())
}

/// `(feasible, boundary_flags, violations)`.
#[pyfunction]
fn classify(params: &Bound<'_, PyDict>) -> PyResult<(bool, Vec<String>, Vec<String>)> {
    let r = feasibility::classify(&params_from_dict(params)?).map_err(py_err)?;
    let flags = r.boundary_flags.iter().map(|b| b.as_str().to_string()).collect();
    let violations = r.violations().iter().map(|b| b.name.as_str().to_string()).collect();
    Ok((r.feasible, flags, violations))
}

#[pyfunction]
fn catalog_ids() -> Vec<String> {
    catalog::list()
}

/// Recorded parameters of a catalog entry; unrecorded ones map to `None`.
#[pyfunction]
fn catalog_entry<'py>(py: Python<'py>, id: &str) -> PyResult<Bound<'py, PyDict>> {
    let e = catalog::get(id).map_err(py_err)?;
    let d = PyDict::new(py);
    for (k, v) in e.params.named() {
        d.set_item(k, v.map(Scalar::render))?;
    }
    Ok(d)
}

/// Measured parameters of a built-in generator, e.g. `"spoke_cube(k=2,n=0)"`.
#[pyfunction]
fn measure<'py>(py: Python<'py>, generator: &str) -> PyResult<Bound<'py, PyDict>> {
    let c = complex::generate(generator).map_err(py_err)?;
    let m = complex::measure(&c);
    let report = complex::validate_measured(&m);
    if !report.ok() {
        let failed: Vec<String> = report
            .failures()
            .iter()
            .map(|i| format!("{}: {}", i.check, i.detail))
            .collect();
        return Err(PyValueError::new_err(failed.join("; ")));
    }
    params_dict(py, &m.params)
}

#[pyfunction]
fn sample_feasible<'py>(py: Python<'py>, count: usize, seed: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    feasibility::sample_feasible(count, seed)
        .iter()
        .map(|p| params_dict(py, p))
        .collect()
}

/// Runs the command-line interface in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = tesstopo::cli::run(std::iter::once("tesstopo".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "tesstopo")]
fn tesstopo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_ids, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entry, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(sample_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
