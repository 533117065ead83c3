//! Python bindings: `import deconflict`.

use deconflict_core as core;
use deconflict_core::scenario::SampleMode;
use deconflict_core::statfit::{Family, FitResult, Fitted};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: core::Error) -> PyErr {
    if e.is_infeasible() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn separation(h: f64) -> PyResult<core::SeparationConfig> {
    core::SeparationConfig::new(h).map_err(to_py)
}

#[pyclass(name = "Mission", frozen, from_py_object, module = "deconflict")]
#[derive(Clone)]
pub struct PyMission(core::Mission);

#[pymethods]
impl PyMission {
    #[new]
    fn new(id: String, origin: (f64, f64), destination: (f64, f64), speed: f64) -> PyResult<Self> {
        let o = core::Vec2::new(origin.0, origin.1);
        let d = core::Vec2::new(destination.0, destination.1);
        core::Mission::new(id, o, d, speed).map(Self).map_err(to_py)
    }

    #[getter]
    fn id(&self) -> &str {
        self.0.id()
    }

    #[getter]
    fn origin(&self) -> (f64, f64) {
        (self.0.origin().x, self.0.origin().y)
    }

    #[getter]
    fn destination(&self) -> (f64, f64) {
        (self.0.destination().x, self.0.destination().y)
    }

    #[getter]
    fn speed(&self) -> f64 {
        self.0.speed()
    }

    #[getter]
    fn duration(&self) -> f64 {
        self.0.duration()
    }

    fn __repr__(&self) -> String {
        let (o, d) = (self.0.origin(), self.0.destination());
        format!(
            "Mission({:?}, ({}, {}), ({}, {}), {})",
            self.0.id(),
            o.x,
            o.y,
            d.x,
            d.y,
            self.0.speed()
        )
    }
}

fn unwrap_missions(missions: &[PyMission]) -> Vec<core::Mission> {
    missions.iter().map(|m| m.0.clone()).collect()
}

#[pyclass(name = "ForbiddenInterval", frozen, module = "deconflict")]
pub struct PyForbiddenInterval(core::ForbiddenInterval);

#[pymethods]
impl PyForbiddenInterval {
    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi
    }

    /// "empty", "bounded" or "unbounded".
    #[getter]
    fn kind(&self) -> &'static str {
        match self.0.kind {
            core::IntervalKind::Empty => "empty",
            core::IntervalKind::Bounded => "bounded",
            core::IntervalKind::Unbounded => "unbounded",
        }
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn width(&self) -> f64 {
        self.0.width()
    }

    fn contains(&self, delta: f64) -> bool {
        self.0.contains(delta)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Schedule", frozen, module = "deconflict")]
pub struct PySchedule(core::Schedule);

#[pymethods]
impl PySchedule {
    /// Ids in the order departures were granted.
    #[getter]
    fn order(&self) -> Vec<String> {
        self.0.order.clone()
    }

    /// `{id: departure_s}`.
    #[getter]
    fn departures<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for e in &self.0.entries {
            d.set_item(&e.id, e.departure)?;
        }
        Ok(d)
    }

    /// `{id: [ids whose forbidden span ends at its departure]}`.
    #[getter]
    fn bindings<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for e in &self.0.entries {
            d.set_item(&e.id, e.bindings.clone())?;
        }
        Ok(d)
    }

    #[getter]
    fn total_delay(&self) -> f64 {
        self.0.total_delay()
    }

    #[getter]
    fn average_delay(&self) -> f64 {
        core::average_delay(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Schedule(order={:?}, total_delay={})", self.0.order, self.0.total_delay())
    }
}

#[pyfunction]
#[pyo3(signature = (first, second, h = 1.5))]
fn forbidden_interval(first: &PyMission, second: &PyMission, h: f64) -> PyResult<PyForbiddenInterval> {
    core::forbidden_interval(&first.0, &second.0, &separation(h)?)
        .map(PyForbiddenInterval)
        .map_err(to_py)
}

/// Greedy schedule for the missions in the given order.
#[pyfunction]
#[pyo3(signature = (missions, h = 1.5, horizon = None))]
fn greedy_schedule(missions: Vec<PyMission>, h: f64, horizon: Option<f64>) -> PyResult<PySchedule> {
    let ms = unwrap_missions(&missions);
    let cfg = separation(h)?;
    let s = match horizon {
        Some(horizon) => core::greedy_schedule(&ms, &cfg, horizon),
        None => core::scheduler::greedy_schedule_auto(&ms, &cfg),
    };
    s.map(PySchedule).map_err(to_py)
}

/// Best flight order and its schedule over all orders.
#[pyfunction]
#[pyo3(signature = (missions, h = 1.5))]
fn optimize_order(missions: Vec<PyMission>, h: f64) -> PyResult<PySchedule> {
    core::optimize_order(&unwrap_missions(&missions), &separation(h)?)
        .map(|r| PySchedule(r.schedule))
        .map_err(to_py)
}

fn airspace(n_agents: usize, seed: u64, side: f64, h: f64, speed_range: (f64, f64)) -> core::AirspaceConfig {
    core::AirspaceConfig {
        side,
        h,
        speed_range,
        n_agents,
        seed,
    }
}

#[pyfunction]
#[pyo3(signature = (n_agents, seed, side = 20.0, h = 1.5, speed_range = (0.66, 1.89)))]
fn generate_topology(n_agents: usize, seed: u64, side: f64, h: f64, speed_range: (f64, f64)) -> PyResult<Vec<PyMission>> {
    let ms = core::generate_topology(&airspace(n_agents, seed, side, h, speed_range)).map_err(to_py)?;
    Ok(ms.into_iter().map(PyMission).collect())
}

/// Average-delay samples, one per topology (`"optimal"`) or per flight order
/// (`"pooled"`).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (n_agents, n_topologies, seed, mode = "pooled", side = 20.0, h = 1.5, speed_range = (0.66, 1.89)))]
fn run_monte_carlo(
    py: Python<'_>,
    n_agents: usize,
    n_topologies: usize,
    seed: u64,
    mode: &str,
    side: f64,
    h: f64,
    speed_range: (f64, f64),
) -> PyResult<Vec<f64>> {
    let mode: SampleMode = mode.parse().map_err(to_py)?;
    let cfg = core::MonteCarloConfig {
        airspace: airspace(n_agents, seed, side, h, speed_range),
        n_topologies,
        mode,
    };
    let report = py.detach(|| core::run_monte_carlo(&cfg)).map_err(to_py)?;
    Ok(report.delays())
}

fn fit_dict<'py>(py: Python<'py>, r: &FitResult) -> PyResult<Bound<'py, PyDict>> {
    let params = PyDict::new(py);
    match r.fitted {
        Fitted::Normal { mean, std_dev } => {
            params.set_item("mean", mean)?;
            params.set_item("std_dev", std_dev)?;
        }
        Fitted::LogNormal { mu, sigma } => {
            params.set_item("mu", mu)?;
            params.set_item("sigma", sigma)?;
        }
        Fitted::Beta { alpha, beta, lower, upper } => {
            params.set_item("alpha", alpha)?;
            params.set_item("beta", beta)?;
            params.set_item("lower", lower)?;
            params.set_item("upper", upper)?;
        }
        Fitted::Gamma { shape, scale } => {
            params.set_item("shape", shape)?;
            params.set_item("scale", scale)?;
        }
    }
    let d = PyDict::new(py);
    d.set_item("family", r.family().name())?;
    d.set_item("params", params)?;
    d.set_item("ssr", r.ssr)?;
    d.set_item("bins", r.bins)?;
    Ok(d)
}

/// Fits one family (`"normal"`, `"lognormal"`, `"beta"`, `"gamma"`).
#[pyfunction]
#[pyo3(signature = (samples, family, bins = 50))]
fn fit<'py>(py: Python<'py>, samples: Vec<f64>, family: &str, bins: usize) -> PyResult<Bound<'py, PyDict>> {
    let family: Family = family.parse().map_err(to_py)?;
    let r = core::statfit::fit_with_bins(&samples, family, bins).map_err(to_py)?;
    fit_dict(py, &r)
}

/// Fits every family and returns the one with the smallest SSR.
#[pyfunction]
#[pyo3(signature = (samples, bins = 50))]
fn select_best<'py>(py: Python<'py>, samples: Vec<f64>, bins: usize) -> PyResult<Bound<'py, PyDict>> {
    let (fits, best) = core::statfit::fit_all(&samples, &Family::ALL, bins).map_err(to_py)?;
    fit_dict(py, &fits[best])
}

/// Local plane coordinates (meters east, north) of a point about a reference.
#[pyfunction]
fn project(point: (f64, f64), reference: (f64, f64)) -> PyResult<(f64, f64)> {
    use core::geo::GeoPoint;
    let p = GeoPoint::new(point.0, point.1).map_err(to_py)?;
    let r = GeoPoint::new(reference.0, reference.1).map_err(to_py)?;
    let v = core::geo::project(p, r).map_err(to_py)?;
    Ok((v.x, v.y))
}

/// Missions and separation radius from a scenario JSON file.
#[pyfunction]
fn load_scenario(path: std::path::PathBuf) -> PyResult<(Vec<PyMission>, f64)> {
    let file = core::ScenarioFile::load(&path).map_err(to_py)?;
    let ms = file.to_missions().map_err(to_py)?;
    Ok((ms.into_iter().map(PyMission).collect(), file.separation_h))
}

#[pymodule]
fn deconflict(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMission>()?;
    m.add_class::<PyForbiddenInterval>()?;
    m.add_class::<PySchedule>()?;
    m.add_function(wrap_pyfunction!(forbidden_interval, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_order, m)?)?;
    m.add_function(wrap_pyfunction!(generate_topology, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(select_best, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(load_scenario, m)?)?;
    Ok(())
}
