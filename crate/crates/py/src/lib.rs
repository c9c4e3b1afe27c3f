//! Python bindings for `nls_inflation`.

use nls_inflation::inflation::{self, Case, ExperimentSpec};
use nls_inflation::modes::{self, ModeIndex, NormSpec, Rational};
use nls_inflation::{resonance, transport};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

fn err(e: nls_inflation::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode_from_py(obj: &Bound<'_, PyAny>) -> PyResult<ModeIndex> {
    if let Ok(j) = obj.extract::<i64>() {
        return Ok(ModeIndex::scalar(j));
    }
    let v: Vec<i64> = obj.extract()?;
    Ok(ModeIndex::new(&v))
}

fn mode_to_py<'py>(py: Python<'py>, m: &ModeIndex) -> PyResult<Bound<'py, PyAny>> {
    if m.dim() == 1 {
        Ok(m.components()[0].into_pyobject(py)?.into_any())
    } else {
        Ok(PyTuple::new(py, m.components())?.into_any())
    }
}

fn modes_to_py<'py>(py: Python<'py>, ms: &[ModeIndex]) -> PyResult<Bound<'py, PyList>> {
    let items = ms.iter().map(|m| mode_to_py(py, m)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn field_to_dict<'py>(py: Python<'py>, f: &modes::ModeField) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (m, c) in f.iter() {
        d.set_item(mode_to_py(py, m)?, *c)?;
    }
    Ok(d)
}

fn tuple_to_py<'py>(py: Python<'py>, t: &resonance::ResonantTuple) -> PyResult<Bound<'py, PyTuple>> {
    let entries = modes_to_py(py, &t.entries)?;
    PyTuple::new(py, [entries.into_any(), mode_to_py(py, &t.target)?])
}

/// Sparse Fourier coefficients keyed by integer modes (`int` in 1-D, tuples otherwise).
#[pyclass(name = "ModeField")]
struct PyModeField {
    inner: modes::ModeField,
}

#[pymethods]
impl PyModeField {
    #[new]
    #[pyo3(signature = (dim, coefficients=None))]
    fn new(dim: usize, coefficients: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut inner = modes::ModeField::new(dim);
        if let Some(c) = coefficients {
            for (k, v) in c.iter() {
                let value: Complex64 = v.extract()?;
                inner.add_to(mode_from_py(&k)?, value).map_err(err)?;
            }
        }
        Ok(PyModeField { inner })
    }

    #[staticmethod]
    fn unit(dim: usize, modes: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let ms = modes.iter().map(mode_from_py).collect::<PyResult<Vec<_>>>()?;
        Ok(PyModeField {
            inner: modes::ModeField::unit_modes(dim, ms).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __getitem__(&self, mode: &Bound<'_, PyAny>) -> PyResult<Complex64> {
        Ok(self.inner.get(&mode_from_py(mode)?))
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        field_to_dict(py, &self.inner)
    }

    fn wiener_norm(&self) -> f64 {
        modes::wiener_norm(&self.inner)
    }

    fn fl_norm(&self, s: f64, p: f64) -> PyResult<f64> {
        modes::fl_norm(&self.inner, NormSpec::new(s, p).map_err(err)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        let terms: Vec<String> = self.inner.iter().map(|(m, c)| format!("{m}: {c}")).collect();
        format!("ModeField(dim={}, {{{}}})", self.inner.dim(), terms.join(", "))
    }
}

/// Brute-force resonant set of `j` in the box `[-k, k]^d`, as `(entries, target)` pairs.
#[pyfunction]
fn enumerate_resonant<'py>(py: Python<'py>, j: &Bound<'py, PyAny>, sigma: usize, k: i64) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    let set = resonance::enumerate_resonant(&mode_from_py(j)?, sigma, k).map_err(err)?;
    set.iter().map(|t| tuple_to_py(py, t)).collect()
}

/// Closed-form cubic resonant set (1-D or multi-D).
#[pyfunction]
fn resonant_cubic<'py>(py: Python<'py>, j: &Bound<'py, PyAny>, k: i64) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    let j = mode_from_py(j)?;
    let set = if j.dim() == 1 {
        resonance::resonant_cubic_1d(&j, k)
    } else {
        resonance::resonant_cubic_multid(&j, k)
    }
    .map_err(err)?;
    set.iter().map(|t| tuple_to_py(py, t)).collect()
}

#[pyfunction]
fn is_resonant(entries: Vec<Bound<'_, PyAny>>, j: &Bound<'_, PyAny>) -> PyResult<bool> {
    let entries = entries.iter().map(mode_from_py).collect::<PyResult<Vec<_>>>()?;
    resonance::is_resonant(&entries, &mode_from_py(j)?).map_err(err)
}

#[pyfunction]
fn quintic_tuple(p: i64, q: i64) -> PyResult<Vec<i64>> {
    let t = resonance::quintic_tuple(p, q).map_err(err)?;
    Ok(t.entries.iter().map(|m| m.components()[0]).collect())
}

/// Integrates the amplitude system; returns `(times, [ {mode: a_j(t)} ... ])`.
#[pyfunction]
#[pyo3(signature = (alpha, t_end, dt, sigma=1, renormalized=false, k_box=None))]
fn integrate_transport<'py>(
    py: Python<'py>,
    alpha: &PyModeField,
    t_end: f64,
    dt: f64,
    sigma: usize,
    renormalized: bool,
    k_box: Option<i64>,
) -> PyResult<(Vec<f64>, Vec<Bound<'py, PyDict>>)> {
    let support: Vec<ModeIndex> = alpha.inner.support().cloned().collect();
    let widest = support.iter().map(|m| m.linf()).max().unwrap_or(0);
    let sys = transport::build_system(&support, sigma, alpha.inner.dim(), renormalized, k_box.unwrap_or(2 * widest))
        .map_err(err)?;
    let traj = py
        .detach(|| transport::integrate_transport(&alpha.inner, &sys, t_end, dt))
        .map_err(err)?;
    let states = traj.states().map(|s| field_to_dict(py, &s.values)).collect::<PyResult<Vec<_>>>()?;
    Ok((traj.times().to_vec(), states))
}

#[pyfunction]
#[pyo3(signature = (eps, t, renormalized=false))]
fn two_mode_zero_corrector(eps: f64, t: f64, renormalized: bool) -> Complex64 {
    transport::two_mode_zero_corrector(eps, t, renormalized)
}

#[pyfunction]
#[pyo3(signature = (eps, renormalized=false))]
fn corrector_peak_time(eps: f64, renormalized: bool) -> PyResult<f64> {
    transport::corrector_peak_time(eps, renormalized).map_err(err)
}

fn parse_case(name: &str) -> PyResult<Case> {
    name.parse::<Case>().map_err(err)
}

/// `(p, q)` with `beta = p/q`.
#[pyfunction]
fn choose_beta(s: f64, sigma: usize, case: &str) -> PyResult<(u64, u64)> {
    let b = inflation::choose_beta(s, sigma, parse_case(case)?).map_err(err)?;
    Ok((b.num(), b.den()))
}

/// Runs one inflation sweep; returns a dict with the chosen `beta`, the records
/// (one dict per baseN) and any solver cross-checks.
#[pyfunction]
#[pyo3(signature = (case, s, beta=None, base_n_list=None, r=0.0, p=2.0, tau=0.1, sigma=None, d=None, cross_validate=false))]
#[allow(clippy::too_many_arguments)]
fn run_inflation<'py>(
    py: Python<'py>,
    case: &str,
    s: f64,
    beta: Option<(u64, u64)>,
    base_n_list: Option<Vec<u64>>,
    r: f64,
    p: f64,
    tau: f64,
    sigma: Option<usize>,
    d: Option<usize>,
    cross_validate: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut spec = ExperimentSpec::new(parse_case(case)?, s);
    if let Some((num, den)) = beta {
        spec.beta = Some(Rational::new(num, den).map_err(err)?);
    }
    if let Some(list) = base_n_list {
        spec.base_n_list = list;
    }
    spec.r = r;
    spec.p = p;
    spec.tau = tau;
    spec.sigma = sigma.unwrap_or(spec.sigma);
    spec.d = d.unwrap_or(spec.d);
    spec.cross_validate = cross_validate;
    let run = py.detach(|| inflation::run_inflation(&spec)).map_err(err)?;

    let out = PyDict::new(py);
    out.set_item("case", run.case.name())?;
    out.set_item("beta", (run.beta.num(), run.beta.den()))?;
    out.set_item("active_modes", run.active_modes)?;
    out.set_item("zero_amplitude", run.zero_amplitude)?;
    let records = PyList::empty(py);
    for rec in &run.records {
        let row = PyDict::new(py);
        row.set_item("n", rec.n)?;
        row.set_item("base_n", rec.base_n)?;
        row.set_item("kappa", rec.kappa)?;
        row.set_item("eps", rec.eps)?;
        row.set_item("t_n", rec.t_n)?;
        row.set_item("norm_in", rec.norm_in)?;
        row.set_item("norm_out", rec.norm_out)?;
        row.set_item("zero_mode_abs", rec.zero_mode_abs)?;
        row.set_item("lower_bound", rec.lower_bound)?;
        records.append(row)?;
    }
    out.set_item("records", records)?;
    let cv = PyList::empty(py);
    for c in &run.cross_validation {
        let row = PyDict::new(py);
        row.set_item("eps", c.eps)?;
        row.set_item("norm_out_approx", c.norm_out_approx)?;
        row.set_item("norm_out_solver", c.norm_out_solver)?;
        row.set_item("relative_gap", c.relative_gap)?;
        cv.append(row)?;
    }
    out.set_item("cross_validation", cv)?;
    let ex = PyDict::new(py);
    ex.set_item("norm_in", run.exponents.norm_in)?;
    ex.set_item("norm_out", run.exponents.norm_out)?;
    ex.set_item("lower_bound", run.exponents.lower_bound)?;
    out.set_item("exponents", ex)?;
    Ok(out)
}

#[pymodule]
fn nls_inflation_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModeField>()?;
    m.add_function(wrap_pyfunction!(enumerate_resonant, m)?)?;
    m.add_function(wrap_pyfunction!(resonant_cubic, m)?)?;
    m.add_function(wrap_pyfunction!(is_resonant, m)?)?;
    m.add_function(wrap_pyfunction!(quintic_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_transport, m)?)?;
    m.add_function(wrap_pyfunction!(two_mode_zero_corrector, m)?)?;
    m.add_function(wrap_pyfunction!(corrector_peak_time, m)?)?;
    m.add_function(wrap_pyfunction!(choose_beta, m)?)?;
    m.add_function(wrap_pyfunction!(run_inflation, m)?)?;
    Ok(())
}
