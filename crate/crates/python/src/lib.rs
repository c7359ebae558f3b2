//! Python bindings: graphs, the relaxation solver, roundings, constants,
//! the exact oracle and the reductions.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use promise_color::alpha;
use promise_color::derand;
use promise_color::gadget::{self, LabelCoverInstance, MarkovOperator};
use promise_color::oracle::{self, OracleBudget};
use promise_color::round::{self as rounding, RoundingMethod, RoundingOutcome};
use promise_color::{sdp, Colouring, Error, Value};

create_exception!(promise_color_py, PromiseColorError, PyException);
create_exception!(promise_color_py, InputError, PromiseColorError);
create_exception!(promise_color_py, SolverError, PromiseColorError);
create_exception!(promise_color_py, BudgetError, PromiseColorError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Parse(_)
        | Error::Format { .. }
        | Error::InvalidGraph(_)
        | Error::InvalidOperator(_)
        | Error::InvalidLabelCover(_)
        | Error::InvalidColouring(_)
        | Error::InvalidParameter(_)
        | Error::EmptyEdgeSet
        | Error::DimensionMismatch { .. } => InputError::new_err(msg),
        Error::NonConvergence { .. }
        | Error::Quadrature { .. }
        | Error::DerandShortfall { .. }
        | Error::FtViolation { .. } => SolverError::new_err(msg),
        Error::BudgetExceeded(_) | Error::DerandParameter { .. } => BudgetError::new_err(msg),
        _ => PromiseColorError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for promise_color::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn fraction<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*v.numer(), *v.denom()))
}

/// Multigraph on vertices `1..=n`; loops are allowed and never proper.
#[pyclass(name = "Graph", module = "promise_color_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyGraph(promise_color::Graph);

#[pymethods]
impl PyGraph {
    /// Edges are `(u, v)` or `(u, v, multiplicity)` tuples.
    #[new]
    fn new(n: usize, edges: Vec<Vec<u64>>) -> PyResult<Self> {
        let triples = edges
            .into_iter()
            .map(|e| match e[..] {
                [u, v] => Ok((u as usize, v as usize, 1)),
                [u, v, w] => Ok((u as usize, v as usize, w)),
                _ => Err(InputError::new_err("edges are (u, v) or (u, v, multiplicity)")),
            })
            .collect::<PyResult<Vec<_>>>()?;
        promise_color::Graph::from_edges(n, triples).py_err().map(Self)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        promise_color::Graph::parse(text).map_err(|e| to_py(e.into())).map(Self)
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Self(promise_color::Graph::complete(n))
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        Self(promise_color::Graph::cycle(n))
    }

    #[staticmethod]
    fn complete_bipartite(a: usize, b: usize) -> Self {
        Self(promise_color::Graph::complete_bipartite(a, b))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    /// Total edge mass, loops included.
    #[getter]
    fn m(&self) -> u64 {
        self.0.m()
    }

    #[getter]
    fn loop_mass(&self) -> u64 {
        self.0.loop_mass()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, u64)> {
        self.0.edges().to_vec()
    }

    fn to_dimacs(&self) -> String {
        self.0.to_dimacs()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.0.n(), self.0.m())
    }
}

/// Unit vectors of a relaxation solution, one per vertex.
#[pyclass(name = "GramSolution", module = "promise_color_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyGram(sdp::GramSolution);

#[pymethods]
impl PyGram {
    #[staticmethod]
    fn from_vectors(graph: &PyGraph, k: u32, vectors: Vec<Vec<f64>>) -> PyResult<Self> {
        sdp::GramSolution::from_vectors(&graph.0, k, vectors).py_err().map(Self)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        sdp::GramSolution::from_text(text).py_err().map(Self)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().py_err()
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.0.objective
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank
    }

    /// Largest constraint violation.
    #[getter]
    fn violation(&self) -> f64 {
        self.0.feas_tol
    }

    #[getter]
    fn vectors(&self) -> Vec<Vec<f64>> {
        self.0.vectors.clone()
    }

    /// Inner product of the vectors of vertices `u` and `v` (1-based).
    fn inner(&self, u: usize, v: usize) -> PyResult<f64> {
        if u == 0 || v == 0 || u > self.0.n() || v > self.0.n() {
            return Err(InputError::new_err("vertex out of range"));
        }
        Ok(self.0.inner(u, v))
    }

    fn __repr__(&self) -> String {
        format!("GramSolution(n={}, k={}, objective={:.6})", self.0.n(), self.0.k, self.0.objective)
    }
}

#[pyfunction]
#[pyo3(signature = (graph, k, seed=0, feas_tol=None, gap_tol=None))]
fn solve_relaxation(graph: &PyGraph, k: u32, seed: u64, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyGram> {
    let defaults = sdp::SolverOptions::default();
    let opts = sdp::SolverOptions {
        seed,
        feas_tol: feas_tol.unwrap_or(defaults.feas_tol),
        target_eps: gap_tol.unwrap_or(defaults.target_eps),
        ..defaults
    };
    sdp::solve_relaxation(&graph.0, k, &opts).py_err().map(PyGram)
}

fn outcome<'py>(py: Python<'py>, o: &RoundingOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("method", o.method.to_string())?;
    d.set_item("colours", o.colouring.colours().to_vec())?;
    d.set_item("palette", o.colouring.palette())?;
    d.set_item("value", fraction(py, &o.achieved_value)?)?;
    d.set_item("seed", o.seed)?;
    d.set_item("trials_used", o.trials_used)?;
    d.set_item("best_trial", o.best_trial)?;
    Ok(d)
}

/// One rounding (`fj` or `kms`) or the best of `trials`; `derand` ignores the seed.
#[pyfunction]
#[pyo3(signature = (graph, solution, l, method="fj", trials=1, seed=0, epsilon=0.02))]
fn round<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    solution: &PyGram,
    l: u32,
    method: &str,
    trials: u64,
    seed: u64,
    epsilon: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let method: RoundingMethod = method.parse().py_err()?;
    let out = py.detach(|| match method {
        RoundingMethod::Derand => derand::derand_round(&graph.0, &solution.0, l, epsilon, None),
        m => rounding::best_of(&graph.0, &solution.0, l, m, trials, seed),
    });
    outcome(py, &out.py_err()?)
}

#[pyfunction]
#[pyo3(signature = (graph, solution, l, method="fj"))]
fn expected_value(graph: &PyGraph, solution: &PyGram, l: u32, method: &str) -> PyResult<f64> {
    match method.parse().py_err()? {
        RoundingMethod::Kms => rounding::expected_kms_value(&graph.0, &solution.0, l),
        _ => rounding::expected_fj_value(&graph.0, &solution.0, l),
    }
    .py_err()
}

fn estimate<'py>(py: Python<'py>, e: &alpha::AlphaEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", e.value)?;
    d.set_item("error_bound", e.abs_error_bound)?;
    d.set_item("a_star", e.diagnostics.a_star)?;
    d.set_item("closed_form", e.diagnostics.closed_form)?;
    Ok(d)
}

#[pyfunction]
fn p_ell(a: f64, l: u32) -> PyResult<f64> {
    alpha::p_ell(a, l).py_err().map(|e| e.value)
}

#[pyfunction]
fn alpha_kl<'py>(py: Python<'py>, k: u32, l: u32) -> PyResult<Bound<'py, PyDict>> {
    let e = py.detach(|| alpha::alpha_kl(k, l)).py_err()?;
    estimate(py, &e)
}

#[pyfunction]
fn alpha_prime_kl<'py>(py: Python<'py>, k: u32, l: u32) -> PyResult<Bound<'py, PyDict>> {
    estimate(py, &alpha::alpha_prime_kl(k, l).py_err()?)
}

/// Cells `(k, l, value, error_bound)` for `l >= k`.
#[pyfunction]
fn alpha_table(py: Python<'_>, ks: Vec<u32>, ls: Vec<u32>) -> PyResult<Vec<(u32, u32, f64, f64)>> {
    let table = py.detach(|| alpha::alpha_table(&ks, &ls)).py_err()?;
    Ok(table.iter().map(|(k, l, e)| (k, l, e.value, e.abs_error_bound)).collect())
}

/// Minimum slack of the audited inequality; raises on a violation.
#[pyfunction]
#[pyo3(signature = (t, l, trials=10_000, seed=0))]
fn ft_bound_check(t: f64, l: u32, trials: usize, seed: u64) -> PyResult<f64> {
    alpha::ft_bound_check(t, l, trials, seed).py_err().map(|r| r.min_slack)
}

#[pyfunction]
fn colouring_value<'py>(py: Python<'py>, graph: &PyGraph, colours: Vec<u32>, palette: u32) -> PyResult<Bound<'py, PyAny>> {
    let c = Colouring::new(colours, palette).py_err()?;
    fraction(py, &promise_color::colouring_value(&graph.0, &c).py_err()?)
}

/// Exact optimum as `(Fraction, colours)`.
#[pyfunction]
#[pyo3(signature = (graph, k, max_vertices=12))]
fn exact_rho<'py>(py: Python<'py>, graph: &PyGraph, k: u32, max_vertices: usize) -> PyResult<(Bound<'py, PyAny>, Vec<u32>)> {
    let budget = OracleBudget {
        max_vertices,
        ..OracleBudget::default()
    };
    let (v, c) = oracle::exact_rho(&graph.0, k, &budget).py_err()?;
    Ok((fraction(py, &v)?, c.colours().to_vec()))
}

#[pyfunction]
fn scale_gadget(graph: &PyGraph, p: u64, q: u64) -> PyResult<PyGraph> {
    gadget::scale_gadget(&graph.0, p, q).py_err().map(PyGraph)
}

/// Reduces a label-cover instance (text format) and reports the reduced
/// graph with the completeness value of the best labelling.
#[pyfunction]
#[pyo3(signature = (instance, k, operator=None, r_blow=None, budget=gadget::PCP_VERTEX_BUDGET))]
fn pcp_reduce<'py>(
    py: Python<'py>,
    instance: &str,
    k: usize,
    operator: Option<&str>,
    r_blow: Option<usize>,
    budget: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = LabelCoverInstance::parse(instance).py_err()?;
    let op = match operator {
        Some(text) => MarkovOperator::parse(text, k),
        None => gadget::bonami_beckner(k),
    }
    .py_err()?;
    let g = gadget::pcp_reduce(&inst, k, &op, r_blow.unwrap_or(inst.r()), budget).py_err()?;
    let (label_value, sol) = inst.optimal_assignment(1_000_000).py_err()?;
    let completeness = gadget::completeness_value(&inst, &sol, k, &g).py_err()?;
    let d = PyDict::new(py);
    d.set_item("graph", PyGraph(g))?;
    d.set_item("label_cover_value", fraction(py, &label_value)?)?;
    d.set_item("assignment", (sol.left, sol.right))?;
    d.set_item("completeness_value", fraction(py, &completeness)?)?;
    d.set_item("spectral_radius", op.spectral_radius())?;
    Ok(d)
}

#[pymodule]
fn promise_color_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyGraph>()?;
    m.add_class::<PyGram>()?;
    m.add("PromiseColorError", py.get_type::<PromiseColorError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("SolverError", py.get_type::<SolverError>())?;
    m.add("BudgetError", py.get_type::<BudgetError>())?;
    m.add_function(wrap_pyfunction!(solve_relaxation, m)?)?;
    m.add_function(wrap_pyfunction!(round, m)?)?;
    m.add_function(wrap_pyfunction!(expected_value, m)?)?;
    m.add_function(wrap_pyfunction!(p_ell, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_kl, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_prime_kl, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_table, m)?)?;
    m.add_function(wrap_pyfunction!(ft_bound_check, m)?)?;
    m.add_function(wrap_pyfunction!(colouring_value, m)?)?;
    m.add_function(wrap_pyfunction!(exact_rho, m)?)?;
    m.add_function(wrap_pyfunction!(scale_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(pcp_reduce, m)?)?;
    Ok(())
}
