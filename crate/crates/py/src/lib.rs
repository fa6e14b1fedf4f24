//! Python bindings: hosts, tilings, canal/grandness checks, the generator
//! and the verification suites.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use std::sync::Arc;

use rgbtiling::canal::{build_canal_system, is_grand, Grandness};
use rgbtiling::coloring::{
    coloring_to_rgb, count_4colorings, is_4colorable, tiling_to_coloring, VertexColoring,
};
use rgbtiling::corpus;
use rgbtiling::embedding::{canonical_code, SemiMpg};
use rgbtiling::harness;
use rgbtiling::io;
use rgbtiling::stats::{black_quadrangulation, euler_degree_residual};
use rgbtiling::tiling::{
    count_rgb_extensions, enumerate_r_tilings, extend_to_rgb, EdgeColor, Tiling, TilingMode,
};

/// (kind, triangles, crossings, deja-vu edges) of one canal line.
type CanalLineSummary = (String, Vec<usize>, Vec<usize>, Vec<usize>);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_color(letter: &str) -> PyResult<EdgeColor> {
    letter
        .chars()
        .next()
        .and_then(EdgeColor::from_letter)
        .ok_or_else(|| value_err(format!("unknown color {letter:?}")))
}

/// A maximal planar graph or semi-MPG host.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: Arc<SemiMpg>,
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::graph_from_json(text).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn k4() -> Self {
        PyGraph { inner: corpus::k4() }
    }

    #[staticmethod]
    fn octahedron() -> Self {
        PyGraph {
            inner: corpus::octahedron(),
        }
    }

    #[staticmethod]
    fn icosahedron() -> Self {
        PyGraph {
            inner: corpus::icosahedron(),
        }
    }

    #[staticmethod]
    fn annulus(n: usize) -> Self {
        PyGraph {
            inner: corpus::antiprism_annulus(n),
        }
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn face_count(&self) -> usize {
        self.inner.embedding().face_count()
    }

    fn is_mpg(&self) -> bool {
        self.inner.is_mpg()
    }

    fn one_piece(&self) -> bool {
        self.inner.one_piece()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.embedding().edges().to_vec()
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        self.inner
            .embedding()
            .faces()
            .iter()
            .map(|f| f.vertices.clone())
            .collect()
    }

    fn nontrivial_triangles(&self) -> Vec<(usize, usize, usize)> {
        self.inner
            .nontrivial_triangles()
            .into_iter()
            .map(|[a, b, c]| (a, b, c))
            .collect()
    }

    fn canonical_code<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &canonical_code(&self.inner))
    }

    fn is_4colorable(&self) -> bool {
        is_4colorable(&self.inner)
    }

    fn count_4colorings(&self) -> u64 {
        count_4colorings(&self.inner)
    }

    fn euler_degree_residual(&self) -> PyResult<i64> {
        euler_degree_residual(&self.inner).map_err(value_err)
    }

    fn to_json(&self) -> String {
        io::graph_to_json(&self.inner)
    }

    fn to_dot(&self) -> String {
        io::to_dot(&self.inner, None, None)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(V={}, E={}, F={}, outer={})",
            self.inner.vertex_count(),
            self.inner.edge_count(),
            self.inner.embedding().face_count(),
            self.inner.outer_facets().len()
        )
    }
}

/// An edge coloring bound to its host.
#[pyclass(name = "Tiling", frozen)]
struct PyTiling {
    inner: Tiling,
}

#[pymethods]
impl PyTiling {
    #[staticmethod]
    fn from_json(host: &PyGraph, text: &str) -> PyResult<Self> {
        Ok(PyTiling {
            inner: io::tiling_from_json(&host.inner, text).map_err(value_err)?,
        })
    }

    fn host(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.host().clone(),
        }
    }

    /// Edge list with color letters, `(u, v, "R"|"G"|"B"|"K")`.
    fn edges(&self) -> Vec<(usize, usize, String)> {
        let emb = self.inner.host().embedding();
        (0..emb.edge_count())
            .map(|e| {
                let (u, v) = emb.edge_endpoints(e);
                (u, v, self.inner.color(e).letter().to_string())
            })
            .collect()
    }

    fn validate(&self, mode: &str) -> PyResult<()> {
        let mode = match mode {
            "r" | "R" => TilingMode::R,
            "rgb" | "RGB" => TilingMode::Rgb,
            other => return Err(value_err(format!("unknown mode {other:?}"))),
        };
        self.inner.validate(mode).map_err(value_err)
    }

    fn red_components(&self) -> Vec<Vec<usize>> {
        self.inner.red_components()
    }

    fn find_red_odd_cycle(&self) -> Option<Vec<usize>> {
        self.inner.find_red_odd_cycle()
    }

    #[pyo3(signature = (color = "R"))]
    fn is_grand(&self, color: &str) -> PyResult<bool> {
        Ok(is_grand(&self.inner, parse_color(color)?).is_grand())
    }

    /// The (v13, v24) partition when grand, else None.
    #[pyo3(signature = (color = "R"))]
    fn partition(&self, color: &str) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
        Ok(match is_grand(&self.inner, parse_color(color)?) {
            Grandness::Grand(p) => Some((p.v13, p.v24)),
            Grandness::NotGrand(_) => None,
        })
    }

    /// The odd-black-cycle witness when not grand.
    #[pyo3(signature = (color = "R"))]
    fn odd_black_witness(&self, color: &str) -> PyResult<Option<Vec<usize>>> {
        Ok(match is_grand(&self.inner, parse_color(color)?) {
            Grandness::Grand(_) => None,
            Grandness::NotGrand(w) => Some(w.cycle),
        })
    }

    fn count_rgb_extensions(&self) -> u64 {
        count_rgb_extensions(&self.inner)
    }

    fn extend_to_rgb(&self) -> Vec<PyTiling> {
        extend_to_rgb(&self.inner)
            .into_iter()
            .map(|t| PyTiling { inner: t })
            .collect()
    }

    /// Per-line canal summaries for one color: kind, triangles, crossings,
    /// deja-vu edges.
    #[pyo3(signature = (color = "R"))]
    fn canal_lines(&self, color: &str) -> PyResult<Vec<CanalLineSummary>> {
        let sys = build_canal_system(&self.inner, parse_color(color)?).map_err(value_err)?;
        Ok(sys
            .lines()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let kind = if l.is_ring() { "ring" } else { "path" };
                (
                    kind.to_string(),
                    l.triangles.clone(),
                    l.crossings.clone(),
                    sys.deja_vu_edges(i),
                )
            })
            .collect())
    }

    fn to_coloring(&self, base: usize) -> PyResult<Vec<u8>> {
        tiling_to_coloring(&self.inner, base)
            .map(|f| f.colors().to_vec())
            .map_err(value_err)
    }

    /// Residual of the quadrangulation identity after dropping one color.
    #[pyo3(signature = (drop = "R"))]
    fn quadrangulation_residual(&self, drop: &str) -> PyResult<i64> {
        black_quadrangulation(&self.inner, parse_color(drop)?)
            .map(|q| q.residual)
            .map_err(value_err)
    }

    fn to_json(&self) -> String {
        io::tiling_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        let reds = self.inner.edges_of_color(EdgeColor::Red).len();
        format!("Tiling(edges={}, red={})", self.inner.colors().len(), reds)
    }
}

/// All isomorphism classes of MPGs for 4 <= n <= max_n, keyed by n.
#[pyfunction]
fn enumerate_mpgs(max_n: usize) -> PyResult<std::collections::BTreeMap<usize, Vec<PyGraph>>> {
    let run = rgbtiling::generator::enumerate_mpgs(max_n, None).map_err(value_err)?;
    Ok(run
        .classes_per_n
        .into_iter()
        .map(|(n, classes)| {
            (
                n,
                classes.into_iter().map(|inner| PyGraph { inner }).collect(),
            )
        })
        .collect())
}

#[pyfunction]
#[pyo3(signature = (graph, limit = None))]
fn r_tilings(graph: &PyGraph, limit: Option<usize>) -> Vec<PyTiling> {
    enumerate_r_tilings(&graph.inner, limit)
        .into_iter()
        .map(|inner| PyTiling { inner })
        .collect()
}

#[pyfunction]
fn count_r_tilings(graph: &PyGraph) -> usize {
    rgbtiling::tiling::count_r_tilings(&graph.inner)
}

/// Converts a proper 4-coloring (list of colors 1..=4 by vertex id) to the
/// induced RGB tiling.
#[pyfunction]
fn coloring_to_tiling(graph: &PyGraph, colors: Vec<u8>) -> PyResult<PyTiling> {
    let f = VertexColoring::new(colors);
    Ok(PyTiling {
        inner: coloring_to_rgb(&graph.inner, &f).map_err(value_err)?,
    })
}

/// Runs a verification suite and returns the reports as a JSON string.
#[pyfunction]
#[pyo3(signature = (suite = "all", max_n = 7))]
fn verify_suite(suite: &str, max_n: usize) -> PyResult<String> {
    let suite: harness::Suite = suite.parse().map_err(value_err)?;
    let reports = harness::run_suite(suite, max_n);
    serde_json::to_string_pretty(&reports).map_err(value_err)
}

/// Hunts annulus belts for odd-cycle-free non-grand R-tilings; returns the
/// report as a JSON string.
#[pyfunction]
#[pyo3(signature = (n1, n2, max_vertices = 12))]
fn hunt_counterexample(n1: usize, n2: usize, max_vertices: usize) -> PyResult<String> {
    let report = harness::hunt_counterexample((n1, n2), max_vertices);
    serde_json::to_string_pretty(&report).map_err(value_err)
}

#[pymodule]
fn rgbtiling_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTiling>()?;
    m.add_function(wrap_pyfunction!(enumerate_mpgs, m)?)?;
    m.add_function(wrap_pyfunction!(r_tilings, m)?)?;
    m.add_function(wrap_pyfunction!(count_r_tilings, m)?)?;
    m.add_function(wrap_pyfunction!(coloring_to_tiling, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(hunt_counterexample, m)?)?;
    Ok(())
}
