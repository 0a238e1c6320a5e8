//! Python bindings for the network-analysis library: the graph type plus
//! the estimators and tests most useful from a notebook.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bibnet::graph::Graph as CoreGraph;
use bibnet::models::{DcbmParams, DcmmParams};
use bibnet::pipeline::{build_tree, K0Schedule, TreeConfig};
use bibnet::spectral::{
    estimate_memberships, modified_score_cluster, score_embed, scree_data, top_eigs, vertex_hunt,
};

fn to_py_err(e: bibnet::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dmatrix_from_rows(rows: &[Vec<f64>], what: &str) -> PyResult<nalgebra::DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(PyValueError::new_err(format!("{what} must be nonempty")));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err(format!("{what} rows must have equal length")));
    }
    Ok(nalgebra::DMatrix::from_fn(n, cols, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Undirected sparse graph with stable integer node ids.
#[pyclass(name = "Graph", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: CoreGraph,
}

#[pymethods]
impl PyGraph {
    /// Build from node ids and (i, j, weight) index triples.
    #[staticmethod]
    fn from_edges(node_ids: Vec<i64>, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        Ok(PyGraph { inner: CoreGraph::from_edges(node_ids, &edges).map_err(to_py_err)? })
    }

    /// Read a `src<TAB>dst<TAB>weight` edge list.
    #[staticmethod]
    fn read_edge_list(path: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: CoreGraph::read_edge_list(path).map_err(to_py_err)? })
    }

    fn write_edge_list(&self, path: &str) -> PyResult<()> {
        self.inner.write_edge_list(path).map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn node_ids(&self) -> Vec<i64> {
        self.inner.node_ids().to_vec()
    }

    fn degrees(&self) -> Vec<f64> {
        self.inner.degrees()
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        if i >= self.inner.n() {
            return Err(PyValueError::new_err(format!("index {i} out of range")));
        }
        Ok(self.inner.neighbors(i).iter().map(|&v| v as usize).collect())
    }

    /// Largest connected component and the map from new to old indices.
    fn giant_component(&self) -> PyResult<(Self, Vec<usize>)> {
        let (g, map) = self.inner.giant_component().map_err(to_py_err)?;
        Ok((PyGraph { inner: g }, map))
    }

    fn induced_subgraph(&self, nodes: Vec<usize>) -> PyResult<Self> {
        Ok(PyGraph { inner: self.inner.induced_subgraph(&nodes).map_err(to_py_err)? })
    }

    /// Personalized network of a node (center included by default).
    #[pyo3(signature = (center, include_center = true))]
    fn ego_network(&self, center: usize, include_center: bool) -> PyResult<Self> {
        Ok(PyGraph {
            inner: bibnet::ingest::ego_network(&self.inner, center, include_center)
                .map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// SgnQ test outcome.
#[pyclass(name = "SgnQResult")]
struct PySgnQResult {
    #[pyo3(get)]
    psi: f64,
    #[pyo3(get)]
    p_value: f64,
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    edge_count: usize,
    #[pyo3(get)]
    eta_norm_sq: f64,
}

#[pymethods]
impl PySgnQResult {
    fn __repr__(&self) -> String {
        format!("SgnQResult(psi={:.4}, p_value={:.4}, n={})", self.psi, self.p_value, self.n)
    }
}

/// SgnQ statistic and one-sided p-value on a binary graph.
#[pyfunction]
fn sgnq(graph: &PyGraph) -> PyResult<PySgnQResult> {
    let r = bibnet::sgnq_statistic(&graph.inner).map_err(to_py_err)?;
    Ok(PySgnQResult {
        psi: r.psi,
        p_value: r.p_value,
        n: r.n,
        edge_count: r.edge_count,
        eta_norm_sq: r.eta_norm_sq,
    })
}

/// Exhaustive distinct-4-tuple psi for n <= 14 (test oracle).
#[pyfunction]
fn sgnq_bruteforce(graph: &PyGraph) -> PyResult<f64> {
    bibnet::sgnq_bruteforce(&graph.inner).map_err(to_py_err)
}

/// Betweenness (pair counts) and closeness per node.
#[pyfunction]
fn centrality(graph: &PyGraph) -> (Vec<f64>, Vec<f64>) {
    let scores = bibnet::centrality(&graph.inner);
    (scores.betweenness, scores.closeness)
}

/// SCORE embedding of the top-k eigenpairs of A + c0 I; returns
/// (coords, valid).
#[pyfunction]
#[pyo3(signature = (graph, k, c0 = 0.0))]
fn score_embedding(graph: &PyGraph, k: usize, c0: f64) -> PyResult<(Vec<Vec<f64>>, Vec<bool>)> {
    let pairs = top_eigs(&graph.inner, k, c0).map_err(to_py_err)?;
    let e = score_embed(&pairs).map_err(to_py_err)?;
    Ok((matrix_to_rows(&e.coords), e.valid))
}

/// Modified SCORE clustering into k0 groups (0-based labels).
#[pyfunction]
#[pyo3(signature = (graph, k0, c0 = 1.0, t = None, seed = 0))]
fn cluster(graph: &PyGraph, k0: usize, c0: f64, t: Option<f64>, seed: u64) -> PyResult<Vec<usize>> {
    let t = t.unwrap_or_else(|| (graph.inner.n() as f64).ln());
    modified_score_cluster(&graph.inner, k0, c0, t, seed).map_err(to_py_err)
}

/// Mixed-membership estimation: SCORE embedding, vertex hunting, and
/// calibrated memberships. Returns (vertices, weights, memberships, valid).
#[pyfunction]
#[pyo3(signature = (graph, k, seed = 0))]
fn mixed_memberships(
    graph: &PyGraph,
    k: usize,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<bool>)> {
    let pairs = top_eigs(&graph.inner, k, 0.0).map_err(to_py_err)?;
    let e = score_embed(&pairs).map_err(to_py_err)?;
    let vertices = vertex_hunt(&e, k, seed).map_err(to_py_err)?;
    let model = estimate_memberships(&e, &vertices, &pairs).map_err(to_py_err)?;
    Ok((
        matrix_to_rows(&model.vertices),
        matrix_to_rows(&model.weights),
        matrix_to_rows(model.memberships.as_ref().expect("memberships always computed")),
        model.valid,
    ))
}

/// Ordered (c0, rank, magnitude, sign) scree entries for c0 in {0, ridge}.
#[pyfunction]
#[pyo3(signature = (graph, kmax, ridge_c0 = 1.0))]
fn scree(graph: &PyGraph, kmax: usize, ridge_c0: f64) -> PyResult<Vec<(f64, usize, f64, i8)>> {
    let entries = scree_data(&graph.inner, kmax, ridge_c0).map_err(to_py_err)?;
    Ok(entries.into_iter().map(|e| (e.c0, e.rank, e.magnitude, e.sign)).collect())
}

/// Sample a degree-corrected block model graph.
#[pyfunction]
#[pyo3(signature = (p, theta, labels, seed = 0))]
fn sample_dcbm(
    p: Vec<Vec<f64>>,
    theta: Vec<f64>,
    labels: Vec<usize>,
    seed: u64,
) -> PyResult<PyGraph> {
    let p = dmatrix_from_rows(&p, "p")?;
    let params = DcbmParams::new(p, theta, labels).map_err(to_py_err)?;
    Ok(PyGraph { inner: bibnet::sample_dcbm(&params, seed).map_err(to_py_err)? })
}

/// Sample a degree-corrected mixed-membership graph.
#[pyfunction]
#[pyo3(signature = (p, theta, pi, seed = 0))]
fn sample_dcmm(
    p: Vec<Vec<f64>>,
    theta: Vec<f64>,
    pi: Vec<Vec<f64>>,
    seed: u64,
) -> PyResult<PyGraph> {
    let p = dmatrix_from_rows(&p, "p")?;
    let pi = dmatrix_from_rows(&pi, "pi")?;
    let params = DcmmParams::new(p, theta, pi).map_err(to_py_err)?;
    Ok(PyGraph { inner: bibnet::sample_dcmm(&params, seed).map_err(to_py_err)? })
}

/// Recursive community tree of a connected graph, as a JSON string
/// (node id, size, p-value, K0, children, annotations).
#[pyfunction]
#[pyo3(signature = (graph, k0_root, p_stop = 0.001, size_stop = 250, c0 = 1.0, seed = 0))]
fn community_tree_json(
    graph: &PyGraph,
    k0_root: usize,
    p_stop: f64,
    size_stop: usize,
    c0: f64,
    seed: u64,
) -> PyResult<String> {
    let cfg = TreeConfig { p_stop, size_stop, c0, ..TreeConfig::default() };
    let tree =
        build_tree(&graph.inner, &K0Schedule::uniform(k0_root), &cfg, seed).map_err(to_py_err)?;
    serde_json::to_string(&tree).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn bibnet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySgnQResult>()?;
    m.add_function(wrap_pyfunction!(sgnq, m)?)?;
    m.add_function(wrap_pyfunction!(sgnq_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(centrality, m)?)?;
    m.add_function(wrap_pyfunction!(score_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_memberships, m)?)?;
    m.add_function(wrap_pyfunction!(scree, m)?)?;
    m.add_function(wrap_pyfunction!(sample_dcbm, m)?)?;
    m.add_function(wrap_pyfunction!(sample_dcmm, m)?)?;
    m.add_function(wrap_pyfunction!(community_tree_json, m)?)?;
    Ok(())
}
