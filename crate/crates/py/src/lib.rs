//! Python bindings for `splinewidth`.
//!
//! Build with `maturin develop --features extension-module`, or copy the
//! compiled `libsplinewidth_py.so` to `splinewidth.so` next to a script.
//! Reports come back as plain dicts with the same fields as the Rust structs.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use splinewidth::nwidth::{self, FunctionClass};
use splinewidth::projection::{self, FunctionSpec, ProjectorKind};
use splinewidth::{spectral, ConstraintFamily, Error};

create_exception!(splinewidth, SplineError, PyValueError);
create_exception!(splinewidth, HypothesisError, SplineError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Hypothesis(_) => HypothesisError::new_err(e.to_string()),
        _ => SplineError::new_err(e.to_string()),
    }
}

/// Serializes through JSON so every report field reaches Python unchanged.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| SplineError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// `"periodic"` means `p` periodicity conditions, `"periodic(m)"` means `m`.
pub fn parse_family(name: &str, p: usize) -> Result<ConstraintFamily, String> {
    Ok(match name {
        "full" => ConstraintFamily::Full,
        "periodic" => ConstraintFamily::Periodic(p),
        "even_zero" => ConstraintFamily::EvenZero,
        "odd_zero" => ConstraintFamily::OddZero,
        "mixed" => ConstraintFamily::Mixed,
        "reduced_odd" => ConstraintFamily::ReducedOdd,
        _ => {
            let m = name
                .strip_prefix("periodic(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| format!("unknown constraint family `{name}`"))?;
            ConstraintFamily::Periodic(m)
        }
    })
}

pub fn parse_class(name: &str) -> Result<FunctionClass, String> {
    serde_json::from_value(serde_json::Value::String(name.into())).map_err(|_| format!("unknown function class `{name}`"))
}

#[pyclass(name = "BreakSequence", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBreaks(splinewidth::BreakSequence);

#[pymethods]
impl PyBreaks {
    #[new]
    fn new(points: Vec<f64>) -> PyResult<Self> {
        splinewidth::BreakSequence::new(points).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (intervals, a = 0.0, b = 1.0))]
    fn uniform(intervals: usize, a: f64, b: f64) -> PyResult<Self> {
        splinewidth::BreakSequence::uniform(intervals, a, b).map(Self).map_err(err)
    }

    /// Interior points moved by at most `amplitude` (absolute, below `h/2`).
    #[staticmethod]
    #[pyo3(signature = (intervals, amplitude, seed, a = 0.0, b = 1.0))]
    fn random(intervals: usize, amplitude: f64, seed: u64, a: f64, b: f64) -> PyResult<Self> {
        splinewidth::BreakSequence::random_perturbed(intervals, amplitude, seed, a, b).map(Self).map_err(err)
    }

    #[getter]
    fn points(&self) -> Vec<f64> {
        self.0.points().to_vec()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h()
    }

    #[getter]
    fn h_min(&self) -> f64 {
        self.0.h_min()
    }

    #[getter]
    fn h_hat(&self) -> f64 {
        self.0.h_hat()
    }

    fn __len__(&self) -> usize {
        self.0.num_intervals()
    }

    fn __repr__(&self) -> String {
        format!("BreakSequence({} intervals on [{}, {}])", self.0.num_intervals(), self.0.a(), self.0.b())
    }
}

#[pyclass(name = "SplineSpace", frozen)]
struct PySpace(splinewidth::SplineSpace);

#[pymethods]
impl PySpace {
    /// Degree `p`, smoothness `k` (default `p - 1`), and a constraint family.
    #[new]
    #[pyo3(signature = (breaks, p, k = None, family = "full"))]
    fn new(breaks: &PyBreaks, p: usize, k: Option<i32>, family: &str) -> PyResult<Self> {
        let fam = parse_family(family, p).map_err(PyValueError::new_err)?;
        let k = k.unwrap_or(p as i32 - 1);
        splinewidth::SplineSpace::new(&breaks.0, p, k, fam).map(Self).map_err(err)
    }

    #[staticmethod]
    fn periodic(breaks: &PyBreaks, p: usize) -> PyResult<Self> {
        splinewidth::SplineSpace::periodic(&breaks.0, p).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn smoothness(&self) -> i32 {
        self.0.smoothness()
    }

    #[getter]
    fn family(&self) -> String {
        self.0.family().name()
    }

    #[getter]
    fn breaks(&self) -> PyBreaks {
        PyBreaks(self.0.breaks().clone())
    }

    #[pyo3(signature = (coeffs, x, deriv = 0))]
    fn eval(&self, coeffs: Vec<f64>, x: f64, deriv: usize) -> PyResult<f64> {
        if coeffs.len() != self.0.dim() {
            return Err(err(Error::Dimension(format!("{} coefficients for a space of dimension {}", coeffs.len(), self.0.dim()))));
        }
        self.0.eval(&coeffs, x, deriv).map_err(err)
    }

    #[pyo3(signature = (x, deriv = 0))]
    fn eval_basis(&self, x: f64, deriv: usize) -> PyResult<Vec<f64>> {
        self.0.eval_basis(x, deriv).map_err(err)
    }

    fn contains_constants(&self) -> bool {
        self.0.contains_constants()
    }

    fn constraint_residual(&self) -> PyResult<f64> {
        self.0.constraint_residual().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("SplineSpace({})", self.0.describe())
    }
}

#[pyclass(name = "Function", frozen)]
struct PyFunction(FunctionSpec);

#[pymethods]
impl PyFunction {
    /// Catalog function: `sin_m`, `cos_m`, `poly_d`, `exp`, `runge`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        FunctionSpec::by_name(name).map(Self).map_err(err)
    }

    /// `f(x, l)` must return the `l`-th derivative for `l <= r_max`.
    #[staticmethod]
    fn custom(name: String, r_max: usize, f: Py<PyAny>) -> Self {
        Self(FunctionSpec::custom(name, r_max, move |x, l| {
            Python::attach(|py| f.call1(py, (x, l)).and_then(|v| v.extract::<f64>(py)).unwrap_or(f64::NAN))
        }))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[pyo3(signature = (x, l = 0))]
    fn eval(&self, x: f64, l: usize) -> PyResult<f64> {
        self.0.eval(x, l).map_err(err)
    }
}

fn kind(q: usize, variational: bool) -> ProjectorKind {
    match (q, variational) {
        (0, _) => ProjectorKind::L2,
        (q, false) => ProjectorKind::RitzRecursive(q),
        (q, true) => ProjectorKind::RitzVariational(q),
    }
}

/// Coefficients of `Q_p^q u`; `q = 0` is the L2 projection.
#[pyfunction]
#[pyo3(signature = (space, u, q = 0, variational = false))]
fn project(py: Python<'_>, space: &PySpace, u: &PyFunction, q: usize, variational: bool) -> PyResult<Vec<f64>> {
    py.detach(|| projection::project(&space.0, &u.0, kind(q, variational)))
        .map(|r| r.coeffs)
        .map_err(err)
}

/// `‖∂^l (u - s)‖` for the spline with `coeffs`.
#[pyfunction]
#[pyo3(signature = (space, u, coeffs, l = 0))]
fn error_norm(space: &PySpace, u: &PyFunction, coeffs: Vec<f64>, l: usize) -> PyResult<f64> {
    projection::error_norm(&space.0, &u.0, &coeffs, l).map_err(err)
}

/// Measured error against the a priori bound for `Q_p^q` in the `l`-th derivative.
#[pyfunction]
#[pyo3(signature = (space, u, r, q = 0, l = 0))]
fn bound_report<'py>(py: Python<'py>, space: &PySpace, u: &PyFunction, r: usize, q: usize, l: usize) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| projection::bound_report(&space.0, &u.0, kind(q, false), r, l)).map_err(err)?;
    to_py(py, &rep)
}

#[pyfunction]
fn laplace_spectrum<'py>(py: Python<'py>, space: &PySpace) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| spectral::laplace_spectrum(&space.0)).map_err(err)?;
    to_py(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (n, p, k, threshold = 1.0))]
fn outlier_report<'py>(py: Python<'py>, n: usize, p: usize, k: usize, threshold: f64) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| spectral::outlier_report(n, p, k, threshold)).map_err(err)?;
    to_py(py, &rep)
}

#[pyfunction]
fn branch_profile<'py>(py: Python<'py>, n: usize, p: usize, k: usize) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| spectral::branch_profile(n, p, k)).map_err(err)?;
    to_py(py, &rep)
}

#[pyfunction]
fn inverse_report<'py>(py: Python<'py>, space: &PySpace) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| spectral::inverse_report(&space.0)).map_err(err)?;
    let out = to_py(py, &rep)?;
    out.set_item("passed", rep.passed())?;
    Ok(out)
}

/// `‖(I - P)T‖` for class `a_per`, `a_full`, `a_0`, `a_1` or `a_2`.
#[pyfunction]
#[pyo3(signature = (space, class_name, r, grid = 2000))]
fn residual_operator_norm<'py>(py: Python<'py>, space: &PySpace, class_name: &str, r: usize, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    let class = parse_class(class_name).map_err(PyValueError::new_err)?;
    let rep = py.detach(|| nwidth::residual_operator_norm(&space.0, class, r, grid)).map_err(err)?;
    let out = to_py(py, &rep)?;
    out.set_item("certified", rep.certified())?;
    Ok(out)
}

#[pyfunction]
fn optimal_space(i: usize, n: usize, p: usize) -> PyResult<PySpace> {
    nwidth::optimal_space(i, n, p).map(PySpace).map_err(err)
}

#[pyfunction]
fn eigconv_report<'py>(py: Python<'py>, i: usize, n: usize, degrees: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| nwidth::eigconv_report(i, n, &degrees)).map_err(err)?;
    to_py(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (n, degrees, q = 0, l = 0))]
fn periodic_eigconv<'py>(py: Python<'py>, n: usize, degrees: Vec<usize>, q: usize, l: usize) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| nwidth::periodic_eigconv(n, q, l, &degrees)).map_err(err)?;
    let out = to_py(py, &rep)?;
    out.set_item("within_bounds", rep.within_bounds())?;
    Ok(out)
}

#[pyfunction]
fn conjecture_explorer<'py>(py: Python<'py>, m: usize, q: usize, p_min: usize, p_max: usize) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| spectral::conjecture_explorer(m, q, p_min..=p_max)).map_err(err)?;
    to_py(py, &rep)
}

#[pymodule]
#[pyo3(name = "splinewidth")]
fn splinewidth_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("SplineError", py.get_type::<SplineError>())?;
    m.add("HypothesisError", py.get_type::<HypothesisError>())?;
    m.add("MAX_DEGREE", splinewidth::MAX_DEGREE)?;
    m.add_class::<PyBreaks>()?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyFunction>()?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(error_norm, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(outlier_report, m)?)?;
    m.add_function(wrap_pyfunction!(branch_profile, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_report, m)?)?;
    m.add_function(wrap_pyfunction!(residual_operator_norm, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_space, m)?)?;
    m.add_function(wrap_pyfunction!(eigconv_report, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_eigconv, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_explorer, m)?)?;
    Ok(())
}
