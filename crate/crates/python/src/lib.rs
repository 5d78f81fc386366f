//! Python module `tractrix_lab`.
//!
//! Tracks, Möbius maps and monodromy reports are classes; the remaining
//! analyses return plain dicts built from their JSON form.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use tractrix_core as core;
use tractrix_core::noneuclid::Geometry;
use tractrix_core::{BikeParams, CurveSpec, StartConvention};

fn err(e: core::Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn geometry(name: &str) -> PyResult<Geometry> {
    name.parse().map_err(err)
}

fn start_convention(name: &str, angle: Option<f64>) -> PyResult<StartConvention> {
    match (name, angle) {
        ("inward-normal", None) => Ok(StartConvention::InwardNormal),
        ("through-centroid", None) => Ok(StartConvention::ThroughCentroid),
        ("centroid", None) => Ok(StartConvention::Centroid),
        ("fixed", Some(angle)) => Ok(StartConvention::FixedDirection { angle }),
        _ => Err(PyValueError::new_err(format!("unknown start convention '{name}' (fixed needs angle)"))),
    }
}

/// A unit-speed front-wheel track.
#[pyclass(frozen)]
struct Track {
    spec: CurveSpec,
    inner: core::FrontTrack,
}

impl Track {
    fn build(spec: CurveSpec) -> PyResult<Self> {
        let inner = core::make_curve(&spec).map_err(err)?;
        Ok(Track { spec, inner })
    }
}

#[pymethods]
impl Track {
    /// Track from a JSON curve spec, e.g. `{"kind":"circle","r":1.0}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: CurveSpec = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Track::build(spec)
    }

    #[staticmethod]
    #[pyo3(signature = (r, traversals=1))]
    fn circle(r: f64, traversals: u32) -> PyResult<Self> {
        Track::build(CurveSpec::circle(r).with_traversals(traversals))
    }

    #[staticmethod]
    fn ellipse(a: f64, b: f64) -> PyResult<Self> {
        Track::build(CurveSpec::ellipse(a, b))
    }

    #[staticmethod]
    #[pyo3(signature = (length, start=(0.0, 0.0), direction=0.0))]
    fn line(length: f64, start: (f64, f64), direction: f64) -> PyResult<Self> {
        Track::build(CurveSpec::line(core::Point::new(start.0, start.1), direction, length))
    }

    /// Circle of geodesic radius `rho` on the sphere or in the hyperbolic plane.
    #[staticmethod]
    fn geodesic_circle(rho: f64, geometry_name: &str) -> PyResult<Self> {
        Track::build(CurveSpec::geodesic_circle(rho, geometry(geometry_name)?))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("curve specs serialize")
    }

    #[getter]
    fn total_length(&self) -> f64 {
        self.inner.total_length()
    }

    #[getter]
    fn closed(&self) -> bool {
        self.inner.is_closed()
    }

    #[getter]
    fn convex(&self) -> bool {
        self.inner.is_convex()
    }

    #[getter]
    fn geometry(&self) -> &'static str {
        self.inner.geometry().name()
    }

    fn position(&self, t: f64) -> (f64, f64) {
        let p = self.inner.position(t);
        (p.x, p.y)
    }

    fn tangent_angle(&self, t: f64) -> f64 {
        self.inner.tangent_angle(t)
    }

    fn curvature(&self, t: f64) -> f64 {
        self.inner.curvature(t)
    }

    /// Signed enclosed area.
    fn area(&self) -> PyResult<f64> {
        core::enclosed_area(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Track({})", self.to_json())
    }
}

/// A Möbius map of the circle of steering angles, normalized to `det = 1`, `trace ≥ 0`.
#[pyclass(frozen, name = "MoebiusMap")]
#[derive(Clone)]
struct PyMoebius {
    inner: core::MoebiusMap,
}

#[pymethods]
impl PyMoebius {
    #[new]
    fn new(matrix: [[f64; 2]; 2]) -> PyResult<Self> {
        Ok(PyMoebius { inner: core::MoebiusMap::from_matrix(matrix).map_err(err)? })
    }

    #[staticmethod]
    fn rotation(phi: f64) -> Self {
        PyMoebius { inner: core::MoebiusMap::rotation(phi) }
    }

    #[getter]
    fn matrix(&self) -> [[f64; 2]; 2] {
        self.inner.m
    }

    #[getter]
    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn apply(&self, alpha: f64) -> f64 {
        self.inner.apply(alpha)
    }

    /// `self ∘ other`.
    fn compose(&self, other: &PyMoebius) -> Self {
        PyMoebius { inner: self.inner.compose(&other.inner) }
    }

    fn inverse(&self) -> Self {
        PyMoebius { inner: self.inner.inverse() }
    }

    #[pyo3(signature = (eps_par=1e-6))]
    fn classify(&self, eps_par: f64) -> &'static str {
        core::classify(&self.inner, eps_par).name()
    }

    /// `(angle, multiplier)` pairs.
    #[pyo3(signature = (eps_par=1e-6))]
    fn fixed_points(&self, eps_par: f64) -> Vec<(f64, f64)> {
        core::fixed_points(&self.inner, eps_par).iter().map(|f| (f.angle, f.multiplier)).collect()
    }

    fn distance(&self, other: &PyMoebius) -> f64 {
        self.inner.distance(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("MoebiusMap({:?})", self.inner.m)
    }
}

/// Monodromy of one traversal of a closed track.
#[pyclass(frozen)]
struct MonodromyReport {
    inner: core::MonodromyReport,
}

#[pymethods]
impl MonodromyReport {
    #[getter]
    fn trace(&self) -> f64 {
        self.inner.trace
    }

    /// `"elliptic"`, `"parabolic"` or `"hyperbolic"`.
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.class.name()
    }

    #[getter]
    fn identity(&self) -> bool {
        self.inner.identity
    }

    #[getter]
    fn fixed_angles(&self) -> Vec<f64> {
        self.inner.fixed_angles.clone()
    }

    #[getter]
    fn multipliers(&self) -> Vec<f64> {
        self.inner.multipliers.clone()
    }

    #[getter]
    fn rear_lengths(&self) -> Vec<f64> {
        self.inner.rear_lengths.clone()
    }

    #[getter]
    fn map(&self) -> PyMoebius {
        PyMoebius { inner: self.inner.map() }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("reports serialize")
    }

    fn __repr__(&self) -> String {
        format!("MonodromyReport(kind={}, trace={})", self.kind(), self.inner.trace)
    }
}

fn params(track: &Track, ell: f64, steps: usize) -> BikeParams {
    BikeParams::new(ell).with_geometry(track.inner.geometry()).with_steps(steps)
}

/// Steering angles at the grid nodes.
#[pyfunction]
#[pyo3(signature = (track, ell, alpha0, steps=4096))]
fn integrate_steering(track: &Track, ell: f64, alpha0: f64, steps: usize) -> PyResult<Vec<f64>> {
    let sol = core::integrate_steering(&track.inner, &params(track, ell, steps), alpha0).map_err(err)?;
    Ok(sol.alphas().to_vec())
}

/// Rear-wheel track: `points`, `alpha`, `cusp_times`, `signed_length`, `closed`, ...
#[pyfunction]
#[pyo3(signature = (track, ell, alpha0, steps=4096))]
fn rear_track<'py>(py: Python<'py>, track: &Track, ell: f64, alpha0: f64, steps: usize) -> PyResult<Bound<'py, PyAny>> {
    let sol = core::integrate_steering(&track.inner, &params(track, ell, steps), alpha0).map_err(err)?;
    to_dict(py, &core::rear_track(&sol).map_err(err)?)
}

/// Area swept between both tractrix branches and a line track.
#[pyfunction]
#[pyo3(signature = (track, ell, alpha0, steps=4096))]
fn tractrix_area(track: &Track, ell: f64, alpha0: f64, steps: usize) -> PyResult<f64> {
    core::tractrix_area(&track.inner, &params(track, ell, steps), alpha0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (track, ell, steps=4096))]
fn monodromy(track: &Track, ell: f64, steps: usize) -> PyResult<MonodromyReport> {
    let inner = core::monodromy(&track.inner, &params(track, ell, steps)).map_err(err)?;
    Ok(MonodromyReport { inner })
}

/// One hatchet planimeter reading; `start` is `inward-normal`, `through-centroid`,
/// `centroid` or `fixed` (with `angle`).
#[pyfunction]
#[pyo3(signature = (track, ell, base=0.0, start="inward-normal", angle=None))]
fn planimeter<'py>(
    py: Python<'py>,
    track: &Track,
    ell: f64,
    base: f64,
    start: &str,
    angle: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let reading = core::measure(&track.inner, ell, base, start_convention(start, angle)?).map_err(err)?;
    to_dict(py, &reading)
}

#[pyfunction]
#[pyo3(signature = (track, tol=1e-8))]
fn critical_length(track: &Track, tol: f64) -> PyResult<f64> {
    core::critical_length(&track.inner, tol).map_err(err)
}

#[pyfunction]
fn menzin_verify<'py>(py: Python<'py>, track: &Track) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &core::menzin_verify(&track.inner).map_err(err)?)
}

/// Spherical or hyperbolic analogue of the Menzin check at wheelbase `ell`.
#[pyfunction]
fn hpz_verify<'py>(py: Python<'py>, track: &Track, ell: f64) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &core::hpz_verify(&track.inner, track.inner.geometry(), ell).map_err(err)?)
}

/// Both sides of the area identity for a loop sampled at `s = j/M`.
#[pyfunction]
fn loop_identity<'py>(py: Python<'py>, ell: f64, x: Vec<f64>, y: Vec<f64>, theta: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let config = core::ConfigLoop::from_periodic_samples(ell, &x, &y, &theta).map_err(err)?;
    to_dict(py, &core::loop_identity(&config).map_err(err)?)
}

/// Stargazing angles along the hyperbolic development of the track's curvature.
#[pyfunction]
#[pyo3(signature = (track, alpha0, steps=4096))]
fn stargazing_angles(track: &Track, alpha0: f64, steps: usize) -> PyResult<Vec<f64>> {
    let curve = core::noneuclid::develop_track(&track.inner, steps);
    core::stargazing_angle(&curve, &core::noneuclid::star_for_initial_angle(alpha0)).map_err(err)
}

#[pymodule]
fn tractrix_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Track>()?;
    m.add_class::<PyMoebius>()?;
    m.add_class::<MonodromyReport>()?;
    m.add_function(wrap_pyfunction!(integrate_steering, m)?)?;
    m.add_function(wrap_pyfunction!(rear_track, m)?)?;
    m.add_function(wrap_pyfunction!(tractrix_area, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(planimeter, m)?)?;
    m.add_function(wrap_pyfunction!(critical_length, m)?)?;
    m.add_function(wrap_pyfunction!(menzin_verify, m)?)?;
    m.add_function(wrap_pyfunction!(hpz_verify, m)?)?;
    m.add_function(wrap_pyfunction!(loop_identity, m)?)?;
    m.add_function(wrap_pyfunction!(stargazing_angles, m)?)?;
    Ok(())
}
