//! Python module `pyqrank`: graphs, classical and quantum rankings, and
//! their comparison statistics.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use qrank::experiments::ExperimentConfig;
use qrank::lindblad::{dense_liouvillian, DEFAULT_DENSE_CAP};
use qrank::netgraph::{self, GraphGenSpec, GraphModel};
use qrank::ranking::{self, DEFAULT_EPS_TIE};
use qrank::solver::{self, DEFAULT_MAX_ITER};
use qrank::{DirectedGraph, IntegrationConfig, LindbladGenerator, C64};

create_exception!(pyqrank, QrankError, PyException);

fn err(e: qrank::Error) -> PyErr {
    QrankError::new_err(e.to_string())
}

const POWER_EPS: f64 = 1e-14;

/// Directed graph without self-loops or duplicate edges.
#[pyclass(name = "Graph", module = "pyqrank", frozen)]
pub struct PyGraph {
    inner: DirectedGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, labels = None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let mut g = DirectedGraph::new(n, edges).map_err(err)?;
        if let Some(l) = labels {
            g = g.with_labels(l).map_err(err)?;
        }
        Ok(Self { inner: g })
    }

    /// Parses "u v" lines; `#` starts a comment.
    #[staticmethod]
    #[pyo3(signature = (text, directed = true))]
    fn from_edge_list(text: &str, directed: bool) -> PyResult<Self> {
        let (g, _) = netgraph::load_edge_list(text.as_bytes(), directed).map_err(err)?;
        Ok(Self { inner: g })
    }

    /// Erdos-Renyi ("er", param = mean degree) or Barabasi-Albert ("ba",
    /// param = m) graph.
    #[staticmethod]
    #[pyo3(signature = (model, n, param, seed = 0, directed = false))]
    fn generate(model: &str, n: usize, param: f64, seed: u64, directed: bool) -> PyResult<Self> {
        let model: GraphModel = model.parse().map_err(err)?;
        let spec = GraphGenSpec { model, n, param, seed, directed };
        Ok(Self { inner: netgraph::generate(&spec).map_err(err)? })
    }

    /// The eight-node test graph.
    #[staticmethod]
    fn toy() -> Self {
        Self { inner: netgraph::toy_graph() }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.node_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.node_count()).map(|v| self.inner.label(v)).collect()
    }

    fn to_edge_list(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        netgraph::save_edge_list(&self.inner, &mut buf).map_err(err)?;
        Ok(String::from_utf8(buf).expect("labels are UTF-8"))
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Scores with their competition ranking.
#[pyclass(name = "Ranking", module = "pyqrank", frozen, get_all)]
pub struct PyRanking {
    scores: Vec<f64>,
    order: Vec<usize>,
    positions: Vec<usize>,
    tie_groups: Vec<Vec<usize>>,
}

impl PyRanking {
    fn to_rank(&self) -> qrank::RankResult {
        qrank::RankResult {
            scores: self.scores.clone(),
            order: self.order.clone(),
            positions: self.positions.clone(),
            tie_groups: self.tie_groups.clone(),
        }
    }
}

impl From<qrank::RankResult> for PyRanking {
    fn from(r: qrank::RankResult) -> Self {
        Self {
            scores: r.scores,
            order: r.order,
            positions: r.positions,
            tie_groups: r.tie_groups,
        }
    }
}

#[pymethods]
impl PyRanking {
    fn distinct_positions(&self) -> usize {
        self.tie_groups.len()
    }

    /// `(position, count)` pairs.
    fn degeneracy_profile(&self) -> Vec<(usize, usize)> {
        ranking::degeneracy_profile(&self.to_rank())
    }

    fn __repr__(&self) -> String {
        format!("Ranking(n={}, positions={})", self.scores.len(), self.tie_groups.len())
    }
}

/// Outcome of integrating the master equation.
#[pyclass(name = "QuantumRun", module = "pyqrank", frozen, get_all)]
pub struct PyQuantumRun {
    populations: Vec<f64>,
    tau: f64,
    steps: u64,
    converged: bool,
    rho: Vec<Vec<C64>>,
}

fn integration(dt: f64, epsilon: f64, max_time: f64) -> IntegrationConfig {
    IntegrationConfig { dt, epsilon, max_time, ..Default::default() }
}

fn google(g: &PyGraph, q: f64) -> PyResult<qrank::StochasticMatrix> {
    netgraph::google_matrix(&netgraph::transition_matrix(&g.inner), q).map_err(err)
}

/// Google matrix as nested lists, rows = destinations.
#[pyfunction]
#[pyo3(signature = (graph, q = 0.9))]
fn google_matrix(graph: &PyGraph, q: f64) -> PyResult<Vec<Vec<f64>>> {
    let m = google(graph, q)?;
    Ok((0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect()).collect())
}

#[pyfunction]
#[pyo3(signature = (graph, q = 0.9))]
fn pagerank(graph: &PyGraph, q: f64) -> PyResult<Vec<f64>> {
    solver::classical_stationary(&google(graph, q)?, POWER_EPS, DEFAULT_MAX_ITER).map_err(err)
}

/// Stationary distribution of the plain random walk.
#[pyfunction]
fn random_walk(graph: &PyGraph) -> PyResult<Vec<f64>> {
    solver::random_walk_stationary(&netgraph::transition_matrix(&graph.inner), POWER_EPS, DEFAULT_MAX_ITER)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (graph, alpha, q = 0.9, dt = 0.01, epsilon = 1e-8, max_time = 1e6))]
fn quantum_rank(py: Python<'_>, graph: &PyGraph, alpha: f64, q: f64, dt: f64, epsilon: f64, max_time: f64) -> PyResult<PyQuantumRun> {
    let gen = LindbladGenerator::from_graph(&graph.inner, q, alpha).map_err(err)?;
    let cfg = integration(dt, epsilon, max_time);
    let run = py.detach(|| solver::integrate_to_stationary(&gen, &cfg)).map_err(err)?;
    let m = run.rho_star.as_matrix();
    Ok(PyQuantumRun {
        populations: run.populations(),
        tau: run.tau,
        steps: run.steps,
        converged: run.converged,
        rho: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
    })
}

/// Convergence time of the classical walk on the Google matrix.
#[pyfunction]
#[pyo3(signature = (graph, q = 0.9, dt = 0.01, epsilon = 1e-8, max_time = 1e6))]
fn classical_tau(py: Python<'_>, graph: &PyGraph, q: f64, dt: f64, epsilon: f64, max_time: f64) -> PyResult<f64> {
    let g = google(graph, q)?;
    let cfg = integration(dt, epsilon, max_time);
    let run = py.detach(|| solver::classical_convergence_time(&g, &cfg)).map_err(err)?;
    Ok(run.tau)
}

/// `1 / |Re lambda_1|` from the dense Liouvillian (n <= 64).
#[pyfunction]
#[pyo3(signature = (graph, alpha, q = 0.9))]
fn spectral_tau(py: Python<'_>, graph: &PyGraph, alpha: f64, q: f64) -> PyResult<f64> {
    let gen = LindbladGenerator::from_graph(&graph.inner, q, alpha).map_err(err)?;
    py.detach(|| {
        let dl = dense_liouvillian(&gen, DEFAULT_DENSE_CAP)?;
        solver::spectral_tau(&dl)
    })
    .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (scores, eps_tie = DEFAULT_EPS_TIE))]
fn rank(scores: Vec<f64>, eps_tie: f64) -> PyResult<PyRanking> {
    Ok(ranking::rank_from_scores(&scores, eps_tie).map_err(err)?.into())
}

/// Kendall concordance in [0, 1].
#[pyfunction]
fn kendall(a: &PyRanking, b: &PyRanking) -> PyResult<f64> {
    ranking::kendall_concordance(&a.to_rank(), &b.to_rank()).map_err(err)
}

/// `position_b - position_a` per node.
#[pyfunction]
fn rank_shift(a: &PyRanking, b: &PyRanking) -> PyResult<Vec<i64>> {
    ranking::rank_shift(&a.to_rank(), &b.to_rank()).map_err(err)
}

/// Runs a CLI experiment from a JSON config string; returns the number of
/// non-converged runs.
#[pyfunction]
fn run_experiment(py: Python<'_>, config_json: &str) -> PyResult<usize> {
    let cfg: ExperimentConfig =
        serde_json::from_str(config_json).map_err(|e| QrankError::new_err(e.to_string()))?;
    py.detach(|| qrank::experiments::run(&cfg)).map_err(err)
}

#[pymodule]
pub fn pyqrank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QrankError", m.py().get_type::<QrankError>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyRanking>()?;
    m.add_class::<PyQuantumRun>()?;
    m.add_function(wrap_pyfunction!(google_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(pagerank, m)?)?;
    m.add_function(wrap_pyfunction!(random_walk, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_rank, m)?)?;
    m.add_function(wrap_pyfunction!(classical_tau, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_tau, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(kendall, m)?)?;
    m.add_function(wrap_pyfunction!(rank_shift, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
