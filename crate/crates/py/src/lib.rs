//! `pyglq`: the task runner and a few direct queries, exposed to Python.
//! Reports come back as JSON text; decode them with `json.loads`.

use glq_cli::{parse_tasks, ModeSel, RunConfig};
use glq_ekr::chartab::cache::TableCache;
use glq_ekr::gfq::build_field;
use glq_ekr::glq::GroupData;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::time::Duration;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn config(
    q: u64,
    n: usize,
    t: usize,
    tasks: &str,
    mode: &str,
    timeout_secs: u64,
    budget_elements: u64,
    cache_dir: Option<String>,
) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::new(q, n, t);
    cfg.tasks = parse_tasks(tasks)?;
    cfg.mode = mode.parse::<ModeSel>()?;
    cfg.timeout = Duration::from_secs(timeout_secs);
    cfg.budget_elements = budget_elements;
    cfg.cache = cache_dir.map(TableCache::new);
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the tasks and returns `(exit_code, [json_document, ...])`.
#[pyfunction]
#[pyo3(signature = (q, n, t=1, tasks="all", mode="both", timeout_secs=60, budget_elements=250_000, cache_dir=None, timestamp=""))]
#[allow(clippy::too_many_arguments)]
fn verify(
    py: Python<'_>,
    q: u64,
    n: usize,
    t: usize,
    tasks: &str,
    mode: &str,
    timeout_secs: u64,
    budget_elements: u64,
    cache_dir: Option<String>,
    timestamp: &str,
) -> PyResult<(i32, Vec<String>)> {
    let cfg = config(q, n, t, tasks, mode, timeout_secs, budget_elements, cache_dir).map_err(value_err)?;
    let out = py.detach(|| glq_cli::run(&cfg));
    let docs = out
        .docs
        .iter()
        .map(|d| d.to_json(&cfg, timestamp).to_string())
        .collect();
    Ok((out.exit_code(), docs))
}

/// `(label, size)` for every conjugacy class of `GL(n, q)`.
#[pyfunction]
#[pyo3(signature = (q, n, budget_elements=250_000))]
fn classes(py: Python<'_>, q: u64, n: usize, budget_elements: u64) -> PyResult<Vec<(String, u64)>> {
    py.detach(|| class_list(q, n, budget_elements)).map_err(value_err)
}

fn class_list(q: u64, n: usize, budget: u64) -> glq_ekr::Result<Vec<(String, u64)>> {
    let f = build_field(q)?;
    let g = GroupData::build(&f, n, budget)?;
    Ok(g.classes().iter().map(|c| (c.index.label(), c.size)).collect())
}

/// The Hoffman bound for one mode as a rational string such as `"24"`.
#[pyfunction]
#[pyo3(signature = (q, n, t=1, mode="points"))]
fn hoffman_bound(py: Python<'_>, q: u64, n: usize, t: usize, mode: &str) -> PyResult<String> {
    let cfg = config(q, n, t, "bound", mode, 60, 250_000, None).map_err(value_err)?;
    let out = py.detach(|| glq_cli::run(&cfg));
    let doc = &out.docs[0];
    doc.result["modes"][0]["hoffman"]["bound"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| PyRuntimeError::new_err(doc.result.to_string()))
}

#[pymodule]
fn pyglq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", glq_cli::SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(classes, m)?)?;
    m.add_function(wrap_pyfunction!(hoffman_bound, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_bad_mode() {
        assert!(config(2, 3, 1, "all", "lines", 1, 10, None).is_err());
        assert!(config(2, 3, 1, "qt", "points", 1, 10, None).is_ok());
    }

    #[test]
    fn gl22_classes() {
        let c = class_list(2, 2, 1000).unwrap();
        assert_eq!(c.iter().map(|x| x.1).sum::<u64>(), 6);
    }
}
