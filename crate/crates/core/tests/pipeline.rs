//! End-to-end pipeline runs over the worked P3 example: graph text to nice
//! decomposition to tables to automaton to linear system to exact optimum,
//! crossing every module boundary once.

use std::collections::BTreeMap;

use tdpoly::automaton::{
    accepts_term, build_automaton, characteristic_tree, enumerate_language, term_to_solution,
};
use tdpoly::cores::{core_for, enumerate_witness_trees, extract_solution, run_tables};
use tdpoly::decomposition::{
    build_heuristic_td, designated_index, make_nice, validate_nice, NiceDecomposition,
};
use tdpoly::formulation::{
    build_system, emit_lp, parse_lp, project_objective, Sense, Weights,
};
use tdpoly::graph::{brute_force_solutions, Graph, ProblemSpec, SolutionTuple};
use tdpoly::rational::rat;
use tdpoly::simplex::optimize;
use tdpoly::verify::{check_feasible, decompose, integral_to_trace};

fn p3() -> (Graph, NiceDecomposition) {
    let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
    let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
    (g, nd)
}

#[test]
fn full_pipeline_p3_independent_set() {
    let (g, nd) = p3();
    assert!(validate_nice(&g, &nd).is_valid());
    let index = designated_index(&nd).unwrap();
    let spec = ProblemSpec::independent_set(1);
    let core = core_for(&spec, &g, false);

    // Tables accept and witness trees project onto the oracle's solutions.
    let tables = run_tables(core.as_ref(), &nd);
    assert!(tables.accepted);
    let (trees, overflow) = enumerate_witness_trees(core.as_ref(), &nd, &tables, 10_000);
    assert!(overflow.is_none());
    let projected: std::collections::BTreeSet<SolutionTuple> = trees
        .iter()
        .map(|wt| extract_solution(core.as_ref(), &index, wt))
        .collect();
    let oracle = brute_force_solutions(&g, &spec, 1 << 20).unwrap();
    assert_eq!(projected, oracle);

    // The automaton accepts exactly the characteristic trees.
    let a = build_automaton(core.as_ref(), &nd, &tables);
    let lang = enumerate_language(&a, 10_000).unwrap();
    assert_eq!(lang.len(), oracle.len());
    for x in &oracle {
        let term = characteristic_tree(&nd, &index, &a.alphabet, x).unwrap();
        assert!(lang.contains(&term));
        let trace = accepts_term(&a, &term).unwrap().expect("solution term accepted");
        let v = tdpoly::formulation::trace_vector(&a, &term, &trace).unwrap();
        let sys = build_system(&a);
        assert!(check_feasible(&sys, &v).is_empty());
        // Terms decode back to their solutions.
        assert_eq!(&term_to_solution(&index, &a.alphabet, 1, 0, &term), x);
    }

    // LP emission round trips and the exact optimum matches brute force.
    let sys = build_system(&a);
    let weights = Weights {
        vertices: g.vertices().map(|v| (v, rat(1))).collect(),
        edges: BTreeMap::new(),
    };
    let obj = project_objective(&index, &a, &weights).unwrap();
    let text = emit_lp(&sys, &obj, Sense::Maximize);
    let parsed = parse_lp(&text).unwrap();
    assert_eq!(emit_lp(&parsed.system, &parsed.objective, parsed.sense), text);
    let (value, vertex) = optimize(&parsed.system, &parsed.objective, parsed.sense).unwrap();
    assert_eq!(value, rat(2));
    assert!(vertex.is_zero_one());
    let (term, _) = integral_to_trace(&a, &sys, &vertex).unwrap();
    let best = term_to_solution(&index, &a.alphabet, 1, 0, &term);
    assert_eq!(
        best,
        SolutionTuple::single_vertex_set([1, 3].into_iter().collect())
    );

    // Convex decomposition of the barycenter of all accepting vertices.
    let mut bary = tdpoly::formulation::RationalVector::new();
    let n = oracle.len() as i64;
    for x in &oracle {
        let term = characteristic_tree(&nd, &index, &a.alphabet, x).unwrap();
        let trace = accepts_term(&a, &term).unwrap().unwrap();
        let v = tdpoly::formulation::trace_vector(&a, &term, &trace).unwrap();
        bary = bary.add_scaled(&tdpoly::rational::rat_frac(1, n), &v);
    }
    assert!(check_feasible(&sys, &bary).is_empty());
    let d = decompose(&a, &sys, &bary).unwrap();
    assert_eq!(d.reconstruct(&a), bary);
    assert_eq!(d.parts.len(), oracle.len());
}

#[test]
fn full_pipeline_k2_cut() {
    let g = Graph::parse("p 2 1\ne 1 2\n").unwrap();
    let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
    let index = designated_index(&nd).unwrap();
    let spec = ProblemSpec::cut(1);
    let core = core_for(&spec, &g, false);
    let tables = run_tables(core.as_ref(), &nd);
    let a = build_automaton(core.as_ref(), &nd, &tables);
    let lang = enumerate_language(&a, 100).unwrap();
    // K2 has exactly one cut-set of size >= 1, labeled at the intro-edge node.
    assert_eq!(lang.len(), 1);
    let term = lang.first().unwrap();
    assert_eq!(term.labels[index.eps[&1]], 1);
    let sol = term_to_solution(&index, &a.alphabet, 0, 1, term);
    assert_eq!(sol, SolutionTuple::single_edge_set([1].into_iter().collect()));
}

#[test]
fn ntd_written_by_one_stage_feeds_the_next() {
    let (g, nd) = p3();
    let text = nd.to_ntd(g.n());
    let nd2 = NiceDecomposition::from_ntd(&text).unwrap();
    assert!(validate_nice(&g, &nd2).is_valid());
    let core = core_for(&ProblemSpec::independent_set(2), &g, false);
    let tables = run_tables(core.as_ref(), &nd2);
    assert!(tables.accepted);
}
