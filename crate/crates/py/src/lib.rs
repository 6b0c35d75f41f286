//! Python module `parity_loqc`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ::parity_loqc::fock::{self, Rail, Surd};
use ::parity_loqc::gate::{self, FactoryCostModel};
use ::parity_loqc::mc;
use ::parity_loqc::parity;
use ::parity_loqc::walk::{self, EncoderStage, EncodingWidth, WalkProblem};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts a JSON value to plain Python objects.
fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(x).map_err(err)?)
}

/// Teleporter orders, encoding width and target success of an encoded gate.
#[pyclass(name = "GateConfig", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGateConfig {
    inner: gate::GateConfig,
}

#[pymethods]
impl PyGateConfig {
    #[new]
    #[pyo3(signature = (n_a, n_r, n_t, w, p_tot = 0.95))]
    fn new(n_a: u32, n_r: u32, n_t: u32, w: u32, p_tot: f64) -> PyResult<Self> {
        Ok(Self { inner: gate::GateConfig::new(n_a, n_r, n_t, w, p_tot).map_err(err)? })
    }

    #[getter]
    fn n_a(&self) -> u32 {
        self.inner.n_a.order()
    }

    #[getter]
    fn n_r(&self) -> u32 {
        self.inner.n_r.order()
    }

    #[getter]
    fn n_t(&self) -> u32 {
        self.inner.n_t.order()
    }

    #[getter]
    fn w(&self) -> u32 {
        self.inner.w.get()
    }

    #[getter]
    fn p_tot(&self) -> f64 {
        self.inner.p_tot
    }

    fn p_gate_single(&self) -> PyResult<f64> {
        gate::p_gate_single(&self.inner).map_err(err)
    }

    fn p_gate_cnot(&self) -> PyResult<f64> {
        gate::p_gate_cnot(&self.inner).map_err(err)
    }

    /// Number of gates within the target; `inf` when the encoder never fails.
    fn gate_budget(&self) -> PyResult<f64> {
        Ok(gate::gate_budget(&self.inner).map_err(err)?.finite().unwrap_or(f64::INFINITY))
    }

    fn expected_uses<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &gate::expected_uses(&self.inner).map_err(err)?)
    }

    fn resource_count<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &gate::resource_count(&self.inner, &FactoryCostModel::default()).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "GateConfig(n_a={}, n_r={}, n_t={}, w={}, p_tot={})",
            self.n_a(),
            self.n_r(),
            self.n_t(),
            self.w(),
            self.p_tot()
        )
    }
}

/// Parity-encoded logical qubits sharing one statevector.
#[pyclass(name = "CodeRegister", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCodeRegister {
    inner: parity::CodeRegister,
}

#[pymethods]
impl PyCodeRegister {
    /// Encodes `sum_L a_L |L>` with one block per logical qubit.
    #[new]
    fn new(logical: Vec<Complex64>, widths: Vec<u32>) -> PyResult<Self> {
        Ok(Self { inner: parity::CodeRegister::from_logical(&logical, &widths).map_err(err)? })
    }

    #[staticmethod]
    fn encode(alpha: Complex64, beta: Complex64, w: u32) -> PyResult<Self> {
        Ok(Self { inner: parity::encode_logical(alpha, beta, w).map_err(err)? })
    }

    #[getter]
    fn widths(&self) -> Vec<usize> {
        self.inner.blocks().iter().map(Vec::len).collect()
    }

    fn tensor(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.tensor(&other.inner).map_err(err)? })
    }

    fn encoder_step(&self, block: usize, component: usize) -> PyResult<Self> {
        Ok(Self { inner: self.inner.encoder_step(block, component).map_err(err)? })
    }

    fn z_measure_recover(&self, block: usize, component: usize, outcome: bool) -> PyResult<Self> {
        Ok(Self { inner: self.inner.z_measure_recover(block, component, outcome).map_err(err)? })
    }

    fn logical_cnot(&self, control: usize, target: usize, seed: u64) -> PyResult<Self> {
        let mut rng = mc::RngStream::new(seed, 0).rng();
        Ok(Self { inner: self.inner.logical_cnot(control, target, &mut rng).map_err(err)? })
    }

    fn logical_z90(&self, block: usize, seed: u64) -> PyResult<Self> {
        let mut rng = mc::RngStream::new(seed, 0).rng();
        Ok(Self { inner: self.inner.logical_z90(block, &mut rng).map_err(err)? })
    }

    fn logical_amplitudes(&self) -> PyResult<Vec<Complex64>> {
        self.inner.logical_amplitudes().map_err(err)
    }
}

#[pyfunction]
fn absorb_prob(p: f64, left: i64, right: i64, start: i64) -> PyResult<f64> {
    walk::absorb_prob(&WalkProblem::new(p, left, right, start).map_err(err)?).map_err(err)
}

/// Absorbing-chain solution as a dict.
#[pyfunction]
fn markov_exact<'py>(py: Python<'py>, p: f64, left: i64, right: i64, start: i64) -> PyResult<Bound<'py, PyAny>> {
    let s = walk::markov_exact(&WalkProblem::new(p, left, right, start).map_err(err)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("absorb_prob_right", s.absorb_prob_right)?;
    d.set_item("mean_steps_to_right", s.mean_steps_to_right)?;
    d.set_item("mean_steps_to_left", s.mean_steps_to_left)?;
    d.set_item("mean_steps", s.mean_steps)?;
    Ok(d.into_any())
}

#[pyfunction]
fn p_add(p: f64, w: u32) -> PyResult<f64> {
    walk::p_add(p, EncodingWidth::new(w)).map_err(err)
}

#[pyfunction]
fn p_re(p: f64, w: u32) -> PyResult<f64> {
    walk::p_re(p, EncodingWidth::new(w)).map_err(err)
}

/// `stage` is one of `add`, `re_success`, `re_fail`.
#[pyfunction]
fn mean_encoder_uses(stage: &str, p: f64, w: u32) -> PyResult<Option<f64>> {
    let stage: EncoderStage = serde_json::from_value(serde_json::Value::String(stage.into())).map_err(err)?;
    walk::mean_encoder_uses(stage, p, EncodingWidth::new(w)).map_err(err)
}

#[pyfunction]
fn solve_min_w(target: f64, n_a: u32, n_r: u32, n_t: u32) -> PyResult<Option<u32>> {
    let t = |n| gate::TeleporterSpec::new(n).map_err(err);
    Ok(gate::solve_min_w(target, t(n_a)?, t(n_r)?, t(n_t)?).map_err(err)?.map(|w| w.get()))
}

#[pyfunction]
fn f_z_klm(f: f64) -> f64 {
    gate::f_z_klm(f)
}

#[pyfunction]
fn klm_concat<'py>(py: Python<'py>, f0: f64, levels: u32) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &gate::klm_concat(f0, levels))
}

#[pyfunction]
#[pyo3(signature = (target = 0.95, n_t = 1))]
fn factory_grid<'py>(py: Python<'py>, target: f64, n_t: u32) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &gate::factory_grid(target, 2..=5, n_t, &FactoryCostModel::default()).map_err(err)?)
}

#[pyfunction]
fn sim_cnot<'py>(py: Python<'py>, cfg: &PyGateConfig, trials: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| mc::sim_cnot(&cfg.inner, trials, seed, &FactoryCostModel::default()));
    serialize(py, &r.map_err(err)?)
}

#[pyfunction]
fn sim_z90<'py>(py: Python<'py>, cfg: &PyGateConfig, trials: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| mc::sim_z90(&cfg.inner, trials, seed, &FactoryCostModel::default()));
    serialize(py, &r.map_err(err)?)
}

#[pyfunction]
fn mc_report<'py>(py: Python<'py>, cfg: &PyGateConfig, trials: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| mc::mc_report(&cfg.inner, trials, seed, &FactoryCostModel::default()));
    serialize(py, &r.map_err(err)?)
}

fn terms(state: &fock::FockState) -> Vec<(Vec<u32>, Complex64)> {
    state.terms().map(|(o, a)| (o.clone(), *a)).collect()
}

/// Elimination resource for `rail` in {"single", "dual"}: output terms,
/// exact success probability as a string and output mode labels.
#[pyfunction]
fn elim_resource<'py>(py: Python<'py>, rail: &str) -> PyResult<Bound<'py, PyAny>> {
    let rail: Rail = serde_json::from_value(serde_json::Value::String(rail.into())).map_err(err)?;
    let float = fock::elim_resource::<Complex64>(rail).map_err(err)?;
    let exact = fock::elim_resource::<Surd>(rail).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("state", terms(&float.state))?;
    d.set_item("probability", exact.probability.to_string())?;
    d.set_item("mode_labels", float.mode_labels)?;
    Ok(d.into_any())
}

/// Terms of `|t_n>` grown from Bell pairs.
#[pyfunction]
fn build_tn(n: u32) -> PyResult<Vec<(Vec<u32>, Complex64)>> {
    Ok(terms(&fock::build_tn::<Complex64>(n).map_err(err)?.state))
}

/// Runs the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errb = Vec::new();
    let argv = std::iter::once("parity-loqc".to_string()).chain(args);
    let code = ::parity_loqc::cli::run(argv, &mut out, &mut errb);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errb).into_owned())
}

#[pymodule(name = "parity_loqc")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGateConfig>()?;
    m.add_class::<PyCodeRegister>()?;
    m.add_function(wrap_pyfunction!(absorb_prob, m)?)?;
    m.add_function(wrap_pyfunction!(markov_exact, m)?)?;
    m.add_function(wrap_pyfunction!(p_add, m)?)?;
    m.add_function(wrap_pyfunction!(p_re, m)?)?;
    m.add_function(wrap_pyfunction!(mean_encoder_uses, m)?)?;
    m.add_function(wrap_pyfunction!(solve_min_w, m)?)?;
    m.add_function(wrap_pyfunction!(f_z_klm, m)?)?;
    m.add_function(wrap_pyfunction!(klm_concat, m)?)?;
    m.add_function(wrap_pyfunction!(factory_grid, m)?)?;
    m.add_function(wrap_pyfunction!(sim_cnot, m)?)?;
    m.add_function(wrap_pyfunction!(sim_z90, m)?)?;
    m.add_function(wrap_pyfunction!(mc_report, m)?)?;
    m.add_function(wrap_pyfunction!(elim_resource, m)?)?;
    m.add_function(wrap_pyfunction!(build_tn, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
