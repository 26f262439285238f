//! Python bindings: the main pipeline stages (graph ingestion, nice
//! decomposition, DP tables, automaton, LP emission, exact solving, and the
//! per-instance verification checks) exposed as a small extension module.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tdpoly::automaton::build_automaton;
use tdpoly::checks::{check_instance, CheckConfig, Instance};
use tdpoly::cores::{core_for, run_tables};
use tdpoly::decomposition::{build_heuristic_td, designated_index, make_nice, parse_td, validate_raw};
use tdpoly::formulation::{build_system, emit_lp, project_objective, Sense, Weights};
use tdpoly::graph::{ProblemKind, ProblemSpec};
use tdpoly::rational::rat;
use tdpoly::simplex::optimize;
use tdpoly::verify::integral_to_trace;

fn problem_spec(problem: &str, ell: u32, d: u32) -> PyResult<ProblemSpec> {
    Ok(match problem {
        "is" | "independent-set" => ProblemSpec::independent_set(ell),
        "ds" | "dominating-set" => ProblemSpec::dominating_set(ell),
        "cut" => ProblemSpec::cut(ell),
        "hc" | "hamiltonian-cycle" => ProblemSpec::hamiltonian_cycle(),
        "coloring" => ProblemSpec::coloring(d),
        _ => return Err(PyValueError::new_err(format!("unknown problem `{problem}`"))),
    })
}

/// A simple undirected graph, parsed from the edge-list format.
#[pyclass(name = "Graph")]
struct PyGraph {
    inner: tdpoly::Graph,
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyGraph> {
        tdpoly::Graph::parse(text)
            .map(|inner| PyGraph { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// A nice edge-introducing tree decomposition.
#[pyclass(name = "Decomposition")]
struct PyDecomposition {
    nd: tdpoly::NiceDecomposition,
}

#[pymethods]
impl PyDecomposition {
    /// Min-fill heuristic decomposition, made nice.
    #[staticmethod]
    fn build(graph: &PyGraph) -> PyResult<PyDecomposition> {
        let raw = build_heuristic_td(&graph.inner);
        make_nice(&graph.inner, &raw)
            .map(|nd| PyDecomposition { nd })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Parse a PACE-style .td document and make it nice.
    #[staticmethod]
    fn from_td(graph: &PyGraph, text: &str) -> PyResult<PyDecomposition> {
        let raw =
            parse_td(text, &graph.inner).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let violations = validate_raw(&graph.inner, &raw);
        if !violations.is_empty() {
            return Err(PyValueError::new_err(violations[0].to_string()));
        }
        make_nice(&graph.inner, &raw)
            .map(|nd| PyDecomposition { nd })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn width(&self) -> usize {
        self.nd.width()
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.nd.len()
    }

    fn to_ntd(&self, n_vertices: usize) -> String {
        self.nd.to_ntd(n_vertices)
    }

    fn __repr__(&self) -> String {
        format!("Decomposition(nodes={}, width={})", self.nd.len(), self.nd.width())
    }
}

/// Per-node table sizes and acceptance for a problem on a decomposition.
#[pyfunction]
fn tables_summary(
    graph: &PyGraph,
    decomposition: &PyDecomposition,
    problem: &str,
    ell: u32,
    d: u32,
) -> PyResult<(Vec<usize>, usize, bool)> {
    let spec = problem_spec(problem, ell, d)?;
    let core = core_for(&spec, &graph.inner, false);
    let tables = run_tables(core.as_ref(), &decomposition.nd);
    let sizes: Vec<usize> = tables.gamma.iter().map(|t| t.len()).collect();
    Ok((sizes, tables.max_table_size, tables.accepted))
}

/// Automaton summary: (states, transitions, width, alphabet size).
#[pyfunction]
fn automaton_summary(
    graph: &PyGraph,
    decomposition: &PyDecomposition,
    problem: &str,
    ell: u32,
    d: u32,
) -> PyResult<(usize, usize, usize, usize)> {
    let spec = problem_spec(problem, ell, d)?;
    let core = core_for(&spec, &graph.inner, false);
    let tables = run_tables(core.as_ref(), &decomposition.nd);
    let a = build_automaton(core.as_ref(), &decomposition.nd, &tables);
    Ok((a.state_count(), a.transition_count(), a.width(), a.alphabet.len()))
}

/// The extended formulation in LP format with the unit-weight projected
/// objective ("unit") or no objective ("none").
#[pyfunction]
fn lp_text(
    graph: &PyGraph,
    decomposition: &PyDecomposition,
    problem: &str,
    ell: u32,
    d: u32,
    objective: &str,
) -> PyResult<String> {
    let spec = problem_spec(problem, ell, d)?;
    let core = core_for(&spec, &graph.inner, false);
    let tables = run_tables(core.as_ref(), &decomposition.nd);
    let a = build_automaton(core.as_ref(), &decomposition.nd, &tables);
    let sys = build_system(&a);
    let obj = match objective {
        "none" => BTreeMap::new(),
        "unit" => {
            let index = designated_index(&decomposition.nd)
                .map_err(|e| PyValueError::new_err(e.to_string()))?;
            let weights = unit_weights(&graph.inner, &spec);
            project_objective(&index, &a, &weights)
                .map_err(|e| PyValueError::new_err(e.to_string()))?
        }
        _ => return Err(PyValueError::new_err("objective must be `unit` or `none`")),
    };
    Ok(emit_lp(&sys, &obj, Sense::Maximize))
}

fn unit_weights(g: &tdpoly::Graph, spec: &ProblemSpec) -> Weights {
    let (d1, _) = spec.arity();
    if d1 > 0 {
        Weights {
            vertices: g.vertices().map(|v| (v, rat(1))).collect(),
            edges: BTreeMap::new(),
        }
    } else {
        Weights {
            vertices: BTreeMap::new(),
            edges: g.edge_ids().map(|e| (e, rat(1))).collect(),
        }
    }
}

/// Exact optimization of the unit-weight objective over the extended
/// formulation. Returns (value, solution) as strings; the value is an exact
/// rational, the solution the decoded element set.
#[pyfunction]
fn solve(
    graph: &PyGraph,
    decomposition: &PyDecomposition,
    problem: &str,
    ell: u32,
    d: u32,
) -> PyResult<(String, String)> {
    let spec = problem_spec(problem, ell, d)?;
    let core = core_for(&spec, &graph.inner, false);
    let tables = run_tables(core.as_ref(), &decomposition.nd);
    let a = build_automaton(core.as_ref(), &decomposition.nd, &tables);
    let sys = build_system(&a);
    let index = designated_index(&decomposition.nd)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let weights = unit_weights(&graph.inner, &spec);
    let obj = project_objective(&index, &a, &weights)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let sense = match spec.kind {
        ProblemKind::DominatingSet => Sense::Minimize,
        _ => Sense::Maximize,
    };
    let (value, vertex) =
        optimize(&sys, &obj, sense).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let (term, _) = integral_to_trace(&a, &sys, &vertex)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let (d1, d2) = core.arity();
    let sol = tdpoly::automaton::term_to_solution(&index, &a.alphabet, d1, d2, &term);
    Ok((value.to_string(), sol.to_string()))
}

/// Runs the full per-instance verification checks and returns the JSON
/// report as a string.
#[pyfunction]
fn cross_validate(graph: &PyGraph, name: &str, seed: u64) -> PyResult<String> {
    let inst = Instance::prepare(name.to_string(), graph.inner.clone());
    let cfg = CheckConfig { seed, ..CheckConfig::default() };
    let reports = check_instance(&inst, &cfg);
    serde_json::to_string_pretty(&reports).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn tdpoly_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyDecomposition>()?;
    m.add_function(wrap_pyfunction!(tables_summary, m)?)?;
    m.add_function(wrap_pyfunction!(automaton_summary, m)?)?;
    m.add_function(wrap_pyfunction!(lp_text, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    Ok(())
}
