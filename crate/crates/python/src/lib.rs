//! Python bindings for `lplde`.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lplde::duffing;
use lplde::harness::{self, FixedParams, SweepMethod, SweepSpec, SweepVariable};
use lplde::oracle;
use lplde::pendulum;
use lplde::specfun::{self, QuadratureConfig};

fn to_py(err: lplde::Error) -> PyErr {
    match err.exit_code() {
        3 => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn method(name: &str) -> PyResult<SweepMethod> {
    name.parse().map_err(to_py)
}

#[pyclass(name = "OscillatorParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyOscillatorParams {
    inner: duffing::OscillatorParams,
}

#[pymethods]
impl PyOscillatorParams {
    #[new]
    fn new(omega: f64, mu: f64, amplitude: f64) -> PyResult<Self> {
        let inner = duffing::OscillatorParams::new(omega, mu, amplitude).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn amplitude(&self) -> f64 {
        self.inner.amplitude
    }

    fn separatrix_amplitude(&self) -> Option<f64> {
        self.inner.separatrix_amplitude()
    }

    fn __repr__(&self) -> String {
        format!(
            "OscillatorParams(omega={}, mu={}, amplitude={})",
            self.inner.omega, self.inner.mu, self.inner.amplitude
        )
    }
}

#[pyclass(name = "FrequencyResult", frozen)]
struct PyFrequencyResult {
    inner: lplde::FrequencyResult,
}

#[pymethods]
impl PyFrequencyResult {
    #[getter]
    fn omega2(&self) -> f64 {
        self.inner.omega2
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method.to_string()
    }

    #[getter]
    fn lambda2(&self) -> Option<f64> {
        self.inner.lambda2_used
    }

    #[getter]
    fn diagnostics(&self) -> BTreeMap<String, f64> {
        self.inner.diagnostics.clone()
    }

    #[getter]
    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn __repr__(&self) -> String {
        format!(
            "FrequencyResult(method={}, omega2={})",
            self.inner.method, self.inner.omega2
        )
    }
}

/// Scaled coefficient tables of the pendulum expansion.
#[pyclass(name = "PendulumTables", frozen)]
struct PyPendulumTables {
    inner: pendulum::PendulumTables,
}

#[pymethods]
impl PyPendulumTables {
    #[new]
    #[pyo3(signature = (omega, amplitude, j_max = pendulum::DEFAULT_J_MAX))]
    fn new(omega: f64, amplitude: f64, j_max: usize) -> PyResult<Self> {
        let p = pendulum::PendulumParams::new(omega, amplitude, j_max).map_err(to_py)?;
        Ok(Self {
            inner: pendulum::PendulumTables::build(&p).map_err(to_py)?,
        })
    }

    #[getter]
    fn c_odd(&self) -> Vec<f64> {
        self.inner.c_odd.clone()
    }

    #[getter]
    fn c_even(&self) -> Vec<f64> {
        self.inner.c_even.clone()
    }

    #[getter]
    fn d1_bar(&self) -> Vec<f64> {
        self.inner.d1_bar.clone()
    }

    #[getter]
    fn alpha1a(&self) -> f64 {
        self.inner.alpha1a
    }

    #[getter]
    fn alpha2_bar(&self) -> f64 {
        self.inner.alpha2_bar
    }

    #[getter]
    fn alpha3a(&self) -> f64 {
        self.inner.alpha3a
    }

    #[getter]
    fn alpha3b(&self) -> f64 {
        self.inner.alpha3b
    }

    fn omega2_at(&self, lambda2: f64) -> f64 {
        self.inner.omega2_at(lambda2)
    }

    fn s3(&self, n: usize, lambda2: f64) -> PyResult<f64> {
        pendulum::s3_source_coefficient(&self.inner, n, lambda2).map_err(to_py)
    }

    fn pms_lambda2(&self) -> PyResult<f64> {
        pendulum::pms_lambda2(&self.inner).map_err(to_py)
    }
}

/// Squared frequency of the Duffing oscillator; `method` is one of
/// `lp1`, `lp3`, `lplde`, `exact`.
#[pyfunction]
#[pyo3(signature = (params, method = "lplde"))]
fn duffing_omega2(params: PyOscillatorParams, method: &str) -> PyResult<PyFrequencyResult> {
    let p = &params.inner;
    let inner = match method {
        "exact" => oracle::duffing_exact_omega2(p, &QuadratureConfig::default()),
        "lp1" => duffing::omega2(p, lplde::Method::Lp(1)),
        "lp2" => duffing::omega2(p, lplde::Method::Lp(2)),
        "lp3" => duffing::omega2(p, lplde::Method::Lp(3)),
        "lplde" => duffing::omega2(p, lplde::Method::Lplde),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(to_py)?;
    Ok(PyFrequencyResult { inner })
}

#[pyfunction]
fn duffing_omega2_at(params: PyOscillatorParams, lambda2: f64, order: usize) -> PyResult<f64> {
    duffing::omega2_at(&params.inner, lambda2, order).map_err(to_py)
}

#[pyfunction]
fn duffing_exact_period(params: PyOscillatorParams) -> PyResult<f64> {
    oracle::duffing_exact_period(&params.inner, &QuadratureConfig::default()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (omega, amplitude, method = "lplde", j_max = pendulum::DEFAULT_J_MAX))]
fn pendulum_omega2(omega: f64, amplitude: f64, method: &str, j_max: usize) -> PyResult<f64> {
    let p = pendulum::PendulumParams::new(omega, amplitude, j_max).map_err(to_py)?;
    harness::evaluate(
        &FixedParams::Pendulum(p),
        self::method(method)?,
        &QuadratureConfig::default(),
    )
    .map_err(to_py)
}

#[pyfunction]
fn pendulum_exact_period(omega: f64, amplitude: f64) -> PyResult<f64> {
    oracle::pendulum_exact_period(omega, amplitude).map_err(to_py)
}

/// Runs a sweep and returns `(header, rows)`.
#[pyfunction]
#[pyo3(signature = (
    system, start, stop, steps, methods,
    variable = "amplitude", omega = 1.0, mu = 1.0, amplitude = 1.0,
    j_max = pendulum::DEFAULT_J_MAX, period = false, errors = false,
))]
#[allow(clippy::too_many_arguments)]
fn sweep(
    system: &str,
    start: f64,
    stop: f64,
    steps: usize,
    methods: Vec<String>,
    variable: &str,
    omega: f64,
    mu: f64,
    amplitude: f64,
    j_max: usize,
    period: bool,
    errors: bool,
) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let fixed = match system {
        "duffing" => FixedParams::Duffing(duffing::OscillatorParams {
            omega,
            mu,
            amplitude,
        }),
        "pendulum" => FixedParams::Pendulum(pendulum::PendulumParams {
            omega,
            amplitude,
            j_max,
        }),
        other => return Err(PyValueError::new_err(format!("unknown system {other:?}"))),
    };
    let variable: SweepVariable = variable.parse().map_err(to_py)?;
    let mut spec = SweepSpec::new(fixed, variable, start, stop, steps);
    spec.methods = methods.iter().map(|m| method(m)).collect::<PyResult<_>>()?;
    spec.period = period;
    spec.errors = errors;
    let table = harness::run_sweep(&spec).map_err(to_py)?;
    Ok((table.header, table.rows))
}

/// `[(name, passed, measured, limit)]` for the invariant suite.
#[pyfunction]
fn selfcheck() -> Vec<(String, bool, f64, f64)> {
    harness::run_selfcheck()
        .into_iter()
        .map(|o| (o.name.to_owned(), o.passed(), o.measured, o.limit))
        .collect()
}

#[pyfunction]
fn bessel_j(n: u32, x: f64) -> PyResult<f64> {
    specfun::bessel_j(n, x).map_err(to_py)
}

#[pyfunction]
fn elliptic_k(m: f64) -> PyResult<f64> {
    specfun::elliptic_k(m).map_err(to_py)
}

#[pymodule]
fn pylplde(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOscillatorParams>()?;
    m.add_class::<PyFrequencyResult>()?;
    m.add_class::<PyPendulumTables>()?;
    m.add_function(wrap_pyfunction!(duffing_omega2, m)?)?;
    m.add_function(wrap_pyfunction!(duffing_omega2_at, m)?)?;
    m.add_function(wrap_pyfunction!(duffing_exact_period, m)?)?;
    m.add_function(wrap_pyfunction!(pendulum_omega2, m)?)?;
    m.add_function(wrap_pyfunction!(pendulum_exact_period, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(selfcheck, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_k, m)?)?;
    Ok(())
}
