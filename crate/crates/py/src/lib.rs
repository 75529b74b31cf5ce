//! Python bindings. Results come back as plain dicts and lists, built from the
//! same JSON the command-line tool prints.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use debate_core as core;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

create_exception!(debate_lab, ConfigError, PyValueError, "Invalid game configuration or argument.");
create_exception!(debate_lab, NumericError, PyException, "A numerical routine failed.");

fn py_err(e: core::DebateError) -> PyErr {
    if e.is_input_error() {
        ConfigError::new_err(e.to_string())
    } else {
        NumericError::new_err(e.to_string())
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| NumericError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A validated game: incumbent quality, challenger prior, shock distribution,
/// contest success function and numerical settings.
#[pyclass(name = "GameConfig", module = "debate_lab", frozen)]
struct PyGameConfig {
    inner: core::GameConfig,
}

#[pymethods]
impl PyGameConfig {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::GameConfig::from_json_str(text)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_path(path: PathBuf) -> PyResult<Self> {
        core::GameConfig::from_path(path)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    /// Normalized JSON document; loading it again gives the same game.
    fn to_json(&self) -> String {
        self.inner.to_json_value().to_string()
    }

    #[getter]
    fn q_i(&self) -> f64 {
        self.inner.q_i()
    }

    #[getter]
    fn prior_mean(&self) -> f64 {
        self.inner.prior().mean()
    }

    fn with_q_i(&self, q_i: f64) -> PyResult<Self> {
        self.inner
            .with_q_i(q_i)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    /// Probability the challenger wins the debate.
    fn theta(&self, q_c: f64) -> PyResult<f64> {
        if !(q_c >= 0.0) {
            return Err(py_err(core::DebateError::Domain(q_c)));
        }
        Ok(self.inner.theta(q_c))
    }

    /// Shock CDF.
    fn g(&self, x: f64) -> f64 {
        self.inner.g(x)
    }

    fn __repr__(&self) -> String {
        format!(
            "GameConfig(q_I={}, prior={}, shock={}, csf={})",
            self.inner.q_i(),
            self.inner.prior().family_tag(),
            self.inner.shock().tag(),
            self.inner.csf().tag()
        )
    }
}

#[pyfunction]
fn validate_csf<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    let c = &config.inner;
    let r = core::validate_csf(c.csf(), c.q_i(), c.numerics()).map_err(py_err)?;
    to_py(py, &r)
}

#[pyfunction]
fn posterior<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::posterior_means(&config.inner).map_err(py_err)?)
}

#[pyfunction]
fn check_posterior_ordering<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::check_posterior_ordering(&config.inner).map_err(py_err)?)
}

/// Equilibrium regime, announcements, payoffs and margin.
#[pyfunction]
fn solve<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::classify_equilibrium(&config.inner).map_err(py_err)?)
}

/// The 2×2 payoff matrix; `q_c` selects one challenger type instead of the ex-ante average.
#[pyfunction]
#[pyo3(signature = (config, q_c = None))]
fn payoff_matrix<'py>(py: Python<'py>, config: &PyGameConfig, q_c: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let probe = q_c.map_or(core::PayoffProbe::ExAnte, core::PayoffProbe::Type);
    to_py(py, &core::payoff_matrix(probe, &config.inner).map_err(py_err)?)
}

/// Checks every constant and threshold response rule for consistency.
#[pyfunction]
fn consistency_scan<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    let c = &config.inner;
    let grid = core::default_strategy_grid(c).map_err(py_err)?;
    to_py(py, &core::threshold_consistency_scan(c, &grid).map_err(py_err)?)
}

/// `sequence` is one of "simultaneous", "incumbent-first", "challenger-first".
#[pyfunction]
fn sequential_equilibria<'py>(py: Python<'py>, config: &PyGameConfig, sequence: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = match sequence {
        "simultaneous" => core::Sequence::Simultaneous,
        "incumbent-first" => core::Sequence::IncumbentFirst,
        "challenger-first" => core::Sequence::ChallengerFirst,
        other => return Err(ConfigError::new_err(format!("unknown sequence {other:?}"))),
    };
    to_py(py, &core::sequential_equilibria(&config.inner, s).map_err(py_err)?)
}

#[pyfunction]
fn sequence_invariance<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::sequence_invariance_check(&config.inner).map_err(py_err)?)
}

#[pyfunction]
fn classify_debate<'py>(py: Python<'py>, config: &PyGameConfig, q_c: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::classify_debate(q_c, &config.inner).map_err(py_err)?)
}

#[pyfunction]
fn informativeness_thresholds<'py>(py: Python<'py>, config: &PyGameConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::informativeness_thresholds(&config.inner).map_err(py_err)?)
}

/// `scenario` is "no-debate", "debate-ex-ante" or "debate-conditional" (needs `q_c`).
#[pyfunction]
#[pyo3(signature = (config, scenario, n, seed = 0, q_c = None))]
fn simulate<'py>(
    py: Python<'py>,
    config: &PyGameConfig,
    scenario: &str,
    n: u64,
    seed: u64,
    q_c: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let scenario = match (scenario, q_c) {
        ("no-debate", None) => core::Scenario::NoDebate,
        ("debate-ex-ante", None) => core::Scenario::DebateExAnte,
        ("debate-conditional", Some(q)) => core::Scenario::DebateConditional(q),
        ("debate-conditional", None) => return Err(ConfigError::new_err("debate-conditional needs q_c")),
        (s, _) => return Err(ConfigError::new_err(format!("unknown scenario {s:?} or stray q_c"))),
    };
    let spec = core::SimulationSpec { scenario, n, seed };
    let r = py
        .detach(|| core::simulate_election(&spec, &config.inner))
        .map_err(py_err)?;
    to_py(py, &r)
}

#[pyfunction]
fn oracle_check<'py>(py: Python<'py>, config: &PyGameConfig, n: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| core::oracle_check(&config.inner, n, seed))
        .map_err(py_err)?;
    to_py(py, &r)
}

/// One row per grid point; `param` is "q_I", "q_C" or "prior.<name>".
#[pyfunction]
fn sweep<'py>(
    py: Python<'py>,
    config: &PyGameConfig,
    param: &str,
    lo: f64,
    hi: f64,
    steps: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let p = core::SweepParameter::parse(param).map_err(py_err)?;
    to_py(py, &core::run_sweep(&config.inner, &p, lo, hi, steps).map_err(py_err)?)
}

#[pymodule]
fn debate_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("NumericError", py.get_type::<NumericError>())?;
    m.add_class::<PyGameConfig>()?;
    m.add_function(wrap_pyfunction!(validate_csf, m)?)?;
    m.add_function(wrap_pyfunction!(posterior, m)?)?;
    m.add_function(wrap_pyfunction!(check_posterior_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(payoff_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(consistency_scan, m)?)?;
    m.add_function(wrap_pyfunction!(sequential_equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(sequence_invariance, m)?)?;
    m.add_function(wrap_pyfunction!(classify_debate, m)?)?;
    m.add_function(wrap_pyfunction!(informativeness_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_check, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
