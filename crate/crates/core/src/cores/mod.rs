//! The DP-core abstraction, the bottom-up table process, witness-tree
//! backtracking, solution extraction through abstract membership functions,
//! and the oracle-backed solution-preservation check.

mod coloring;
mod cut;
mod dominating_set;
mod hamiltonian;
mod independent_set;

pub use coloring::ColoringCore;
pub use cut::CutCore;
pub use dominating_set::DominatingSetCore;
pub use hamiltonian::{HamiltonianCycleCore, UncorrectedHamiltonianCycleCore};
pub use independent_set::IndependentSetCore;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::decomposition::{DesignatedIndex, NiceDecomposition, NodeId, NodeKind};
use crate::graph::{
    brute_force_solutions, is_solution, Graph, OracleError, ProblemKind, ProblemSpec,
    SolutionTuple, VertexId,
};
use crate::witness::Witness;

/// A dynamic programming core: transition functions on canonical witness
/// strings plus the final predicate and the abstract membership functions.
///
/// All component functions are deterministic and total on canonical
/// witnesses; applying a component to a set of witnesses is the union over
/// its elements (see [`apply_unary_to_set`]).
pub trait DpCore: Sync {
    fn name(&self) -> String;

    /// (d1, d2): number of vertex-set and edge-set solution components.
    fn arity(&self) -> (usize, usize);

    fn leaf(&self) -> Vec<Witness>;
    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness>;
    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness>;
    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness>;
    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness>;
    fn is_final(&self, w: &Witness) -> bool;

    /// Abstract membership: component `i < d1` asks whether vertex `element`
    /// is in the i-th vertex set; component `d1 <= i < d1+d2` asks whether
    /// edge `element` is in the (i-d1)-th edge set.
    fn member(&self, component: usize, element: u32, w: &Witness) -> bool;

    /// Human-readable rendering of a witness, for reports and dumps.
    fn describe(&self, w: &Witness) -> String;

    /// Analytic table-size ceiling for width k, n vertices, m edges.
    /// `None` when the bound overflows u128.
    fn table_ceiling(&self, k: usize, n: usize, m: usize) -> Option<u128>;
}

/// Builds the core matching a problem spec. Cores needing the incidence map
/// (Cut) copy it from the graph.
pub fn core_for(spec: &ProblemSpec, g: &Graph, uncorrected: bool) -> Box<dyn DpCore> {
    match spec.kind {
        ProblemKind::IndependentSet => Box::new(IndependentSetCore { ell: spec.ell }),
        ProblemKind::DominatingSet => Box::new(DominatingSetCore {
            ell: spec.ell,
            uncorrected,
        }),
        ProblemKind::Cut => Box::new(CutCore::new(spec.ell, g)),
        ProblemKind::HamiltonianCycle => {
            if uncorrected {
                Box::new(UncorrectedHamiltonianCycleCore::new(g))
            } else {
                Box::new(HamiltonianCycleCore)
            }
        }
        ProblemKind::DColoring => Box::new(ColoringCore { d: spec.d }),
    }
}

pub fn apply_unary_to_set(
    f: impl Fn(&Witness) -> Vec<Witness>,
    set: &BTreeSet<Witness>,
) -> BTreeSet<Witness> {
    let mut out = BTreeSet::new();
    for w in set {
        out.extend(f(w));
    }
    out
}

/// Per-node witness tables from the bottom-up inductive process.
#[derive(Debug, Clone)]
pub struct Tables {
    /// Gamma(u), sorted ascending by canonical bytes, per node.
    pub gamma: Vec<Vec<Witness>>,
    pub max_table_size: usize,
    pub max_table_node: NodeId,
    pub accepted: bool,
}

impl Tables {
    pub fn total_witnesses(&self) -> usize {
        self.gamma.iter().map(|t| t.len()).sum()
    }

    pub fn final_root_witnesses<'a>(&'a self, core: &'a dyn DpCore, root: NodeId) -> Vec<&'a Witness> {
        self.gamma[root].iter().filter(|w| core.is_final(w)).collect()
    }
}

/// Runs the table process over a nice decomposition: children strictly before
/// parents, each table deduplicated by canonical bytes.
pub fn run_tables(core: &dyn DpCore, nd: &NiceDecomposition) -> Tables {
    let mut gamma: Vec<Vec<Witness>> = vec![Vec::new(); nd.len()];
    for u in nd.tree.bottom_up() {
        let set: BTreeSet<Witness> = match nd.kinds[u] {
            NodeKind::Leaf => core.leaf().into_iter().collect(),
            NodeKind::IntroVertex(v) => {
                let child = nd.tree.children(u)[0];
                gamma[child]
                    .iter()
                    .flat_map(|w| core.intro_vertex(v, w))
                    .collect()
            }
            NodeKind::ForgetVertex(v) => {
                let child = nd.tree.children(u)[0];
                gamma[child]
                    .iter()
                    .flat_map(|w| core.forget_vertex(v, w))
                    .collect()
            }
            NodeKind::IntroEdge(_, a, b) => {
                let child = nd.tree.children(u)[0];
                gamma[child]
                    .iter()
                    .flat_map(|w| core.intro_edge(a, b, w))
                    .collect()
            }
            NodeKind::Join => {
                let c1 = nd.tree.children(u)[0];
                let c2 = nd.tree.children(u)[1];
                let mut out = BTreeSet::new();
                for w1 in &gamma[c1] {
                    for w2 in &gamma[c2] {
                        out.extend(core.join(w1, w2));
                    }
                }
                out
            }
        };
        gamma[u] = set.into_iter().collect();
    }
    let (max_table_node, max_table_size) = gamma
        .iter()
        .enumerate()
        .map(|(u, t)| (u, t.len()))
        .max_by_key(|&(u, len)| (len, usize::MAX - u))
        .unwrap_or((0, 0));
    let accepted = gamma[nd.root()].iter().any(|w| core.is_final(w));
    Tables { gamma, max_table_size, max_table_node, accepted }
}

/// A per-node choice of table entries certifying acceptance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTree {
    pub assignment: Vec<Witness>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("witness-tree enumeration overflowed the limit of {limit}")]
pub struct Overflow {
    pub limit: usize,
}

/// Precomputed backtracking structure: for node u and the table index of its
/// witness, the child index tuples that produce it.
struct BacktrackIndex {
    /// options[u][i]: sorted child-index tuples ([], [j], or [j1, j2]).
    options: Vec<Vec<Vec<Vec<usize>>>>,
}

fn backtrack_index(core: &dyn DpCore, nd: &NiceDecomposition, tables: &Tables) -> BacktrackIndex {
    let mut options: Vec<Vec<Vec<Vec<usize>>>> =
        (0..nd.len()).map(|u| vec![Vec::new(); tables.gamma[u].len()]).collect();
    for u in nd.tree.bottom_up() {
        match nd.kinds[u] {
            NodeKind::Leaf => {
                for opts in options[u].iter_mut() {
                    opts.push(Vec::new());
                }
            }
            NodeKind::IntroVertex(_) | NodeKind::ForgetVertex(_) | NodeKind::IntroEdge(..) => {
                let child = nd.tree.children(u)[0];
                for (j, w) in tables.gamma[child].iter().enumerate() {
                    let succs = match nd.kinds[u] {
                        NodeKind::IntroVertex(v) => core.intro_vertex(v, w),
                        NodeKind::ForgetVertex(v) => core.forget_vertex(v, w),
                        NodeKind::IntroEdge(_, a, b) => core.intro_edge(a, b, w),
                        _ => unreachable!(),
                    };
                    for s in succs {
                        let i = tables.gamma[u].binary_search(&s).expect("successor in table");
                        options[u][i].push(vec![j]);
                    }
                }
            }
            NodeKind::Join => {
                let c1 = nd.tree.children(u)[0];
                let c2 = nd.tree.children(u)[1];
                for (j1, w1) in tables.gamma[c1].iter().enumerate() {
                    for (j2, w2) in tables.gamma[c2].iter().enumerate() {
                        for s in core.join(w1, w2) {
                            let i =
                                tables.gamma[u].binary_search(&s).expect("successor in table");
                            options[u][i].push(vec![j1, j2]);
                        }
                    }
                }
            }
        }
        for opts in options[u].iter_mut() {
            opts.sort();
            opts.dedup();
        }
    }
    BacktrackIndex { options }
}

/// Enumerates every witness tree without duplicates, in lexicographic order
/// of canonical bytes (root final witnesses ascending, then child choices at
/// each node ascending). Stops after `limit` trees with an overflow signal;
/// the partial list is returned alongside.
pub fn enumerate_witness_trees(
    core: &dyn DpCore,
    nd: &NiceDecomposition,
    tables: &Tables,
    limit: usize,
) -> (Vec<WitnessTree>, Option<Overflow>) {
    let index = backtrack_index(core, nd, tables);
    let root = nd.root();
    let n = nd.len();
    let mut out: Vec<WitnessTree> = Vec::new();
    let mut overflow = None;
    let mut chosen: Vec<usize> = vec![usize::MAX; n];

    // Nodes in descending id order: every node's parent precedes it, so its
    // table index is already fixed when visited.
    fn descend(
        nd: &NiceDecomposition,
        tables: &Tables,
        index: &BacktrackIndex,
        pos: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<WitnessTree>,
        limit: usize,
    ) -> bool {
        let n = nd.len();
        if pos == n {
            if out.len() == limit {
                return false;
            }
            let assignment = (0..n).map(|u| tables.gamma[u][chosen[u]].clone()).collect();
            out.push(WitnessTree { assignment });
            return true;
        }
        let u = n - 1 - pos;
        let children: Vec<NodeId> = nd.tree.children(u).to_vec();
        let opts = &index.options[u][chosen[u]];
        for opt in opts {
            for (slot, &c) in children.iter().enumerate() {
                chosen[c] = opt[slot];
            }
            if !descend(nd, tables, index, pos + 1, chosen, out, limit) {
                return false;
            }
        }
        true
    }

    let finals: Vec<usize> = tables.gamma[root]
        .iter()
        .enumerate()
        .filter(|(_, w)| core.is_final(w))
        .map(|(i, _)| i)
        .collect();
    'outer: for i in finals {
        chosen[root] = i;
        if !descend(nd, tables, &index, 0, &mut chosen, &mut out, limit) {
            overflow = Some(Overflow { limit });
            break 'outer;
        }
    }
    (out, overflow)
}

/// Reads the solution tuple off a witness tree through the membership
/// functions at the designated nodes.
pub fn extract_solution(
    core: &dyn DpCore,
    index: &DesignatedIndex,
    wt: &WitnessTree,
) -> SolutionTuple {
    let (d1, d2) = core.arity();
    let mut vertex_sets = Vec::with_capacity(d1);
    for i in 0..d1 {
        let set: BTreeSet<VertexId> = index
            .nu
            .iter()
            .filter(|&(&v, &node)| core.member(i, v, &wt.assignment[node]))
            .map(|(&v, _)| v)
            .collect();
        vertex_sets.push(set);
    }
    let mut edge_sets = Vec::with_capacity(d2);
    for j in 0..d2 {
        let set: BTreeSet<u32> = index
            .eps
            .iter()
            .filter(|&(&e, &node)| core.member(d1 + j, e, &wt.assignment[node]))
            .map(|(&e, _)| e)
            .collect();
        edge_sets.push(set);
    }
    SolutionTuple { vertex_sets, edge_sets }
}

/// Outcome of checking the two solution-preservation conditions against the
/// brute-force oracle.
#[derive(Debug, Clone)]
pub struct PreservationReport {
    /// Condition 1: every witness tree extracts to a member of Sol(g).
    pub extracted_all_solutions: bool,
    /// Condition 2: every oracle solution is extracted by some witness tree.
    pub all_solutions_extracted: bool,
    /// Extracted tuples failing the problem predicate (condition 1 witnesses).
    pub bogus_extractions: Vec<SolutionTuple>,
    /// Oracle solutions no witness tree produced (condition 2 witnesses).
    pub missing_solutions: Vec<SolutionTuple>,
    /// True when witness-tree enumeration overflowed; the report is partial.
    pub partial: bool,
    pub witness_tree_count: usize,
    pub solution_count: usize,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.extracted_all_solutions && self.all_solutions_extracted && !self.partial
    }
}

pub fn check_solution_preserving(
    core: &dyn DpCore,
    nd: &NiceDecomposition,
    index: &DesignatedIndex,
    g: &Graph,
    spec: &ProblemSpec,
    limit: usize,
    oracle_budget: u64,
) -> Result<PreservationReport, OracleError> {
    let oracle = brute_force_solutions(g, spec, oracle_budget)?;
    let tables = run_tables(core, nd);
    let (trees, overflow) = enumerate_witness_trees(core, nd, &tables, limit);
    let mut extracted: BTreeSet<SolutionTuple> = BTreeSet::new();
    let mut bogus: Vec<SolutionTuple> = Vec::new();
    for wt in &trees {
        let x = extract_solution(core, index, wt);
        if !is_solution(g, spec, &x) && !bogus.contains(&x) {
            bogus.push(x.clone());
        }
        extracted.insert(x);
    }
    let missing: Vec<SolutionTuple> =
        oracle.iter().filter(|s| !extracted.contains(s)).cloned().collect();
    Ok(PreservationReport {
        extracted_all_solutions: bogus.is_empty(),
        // A truncated enumeration cannot certify condition 2.
        all_solutions_extracted: missing.is_empty() && overflow.is_none(),
        bogus_extractions: bogus,
        missing_solutions: missing,
        partial: overflow.is_some(),
        witness_tree_count: trees.len(),
        solution_count: oracle.len(),
    })
}

/// Number of perfect-matching/free configurations of b bag slots:
/// sum over even-sized matched subsets A of #matchings(A) * 2^(b-|A|).
/// Used by the Hamiltonian-cycle table ceiling.
pub(crate) fn matching_configs(b: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut j = 0usize;
    while 2 * j <= b {
        let c = binomial(b as u128, (2 * j) as u128)?;
        let m = double_factorial_odd(j)?;
        let rest = 1u128.checked_shl((b - 2 * j) as u32)?;
        total = total.checked_add(c.checked_mul(m)?.checked_mul(rest)?)?;
        j += 1;
    }
    Some(total)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)?;
        r /= i + 1;
    }
    Some(r)
}

/// (2j-1)!! = number of perfect matchings on 2j labeled points.
fn double_factorial_odd(j: usize) -> Option<u128> {
    let mut r: u128 = 1;
    for i in 1..=j {
        r = r.checked_mul((2 * i - 1) as u128)?;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{build_heuristic_td, designated_index, make_nice};
    use crate::graph::Graph;
    use crate::witness::{Dec, Enc};
    use std::collections::BTreeMap;

    fn p3() -> Graph {
        Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap()
    }

    fn p3_nd() -> NiceDecomposition {
        let g = p3();
        make_nice(&g, &build_heuristic_td(&g)).unwrap()
    }

    fn is_witness(s: &[u32], c: u32) -> Witness {
        Enc::new().set(&s.iter().copied().collect()).u32(c).finish()
    }

    /// Hand-evaluated IS tables over the P3 running example.
    #[test]
    fn is_tables_p3_running_example() {
        let nd = p3_nd();
        let core = IndependentSetCore { ell: 1 };
        let tables = run_tables(&core, &nd);
        let sizes: Vec<usize> = tables.gamma.iter().map(|t| t.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 3, 3, 6, 5, 4, 3]);
        assert_eq!(tables.max_table_size, 6);
        assert_eq!(tables.max_table_node, 5);
        let root: BTreeSet<Witness> = tables.gamma[8].iter().cloned().collect();
        let expect: BTreeSet<Witness> =
            [is_witness(&[], 0), is_witness(&[], 1), is_witness(&[], 2)].into_iter().collect();
        assert_eq!(root, expect);
        assert!(tables.accepted); // ell = 1 <= 2
        let core3 = IndependentSetCore { ell: 3 };
        assert!(!run_tables(&core3, &nd).accepted);
    }

    #[test]
    fn is_tables_k2_threshold_2() {
        let k2 = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let nd = make_nice(&k2, &build_heuristic_td(&k2)).unwrap();
        let core = IndependentSetCore { ell: 2 };
        let tables = run_tables(&core, &nd);
        let root: BTreeSet<Witness> = tables.gamma[nd.root()].iter().cloned().collect();
        let expect: BTreeSet<Witness> =
            [is_witness(&[], 0), is_witness(&[], 1)].into_iter().collect();
        assert_eq!(root, expect);
        assert!(!tables.accepted);
    }

    #[test]
    fn empty_graph_tables_are_leaf() {
        let g = Graph::parse("p 0 0\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        assert_eq!(tables.gamma[nd.root()], core.leaf());
        assert!(tables.accepted);
    }

    #[test]
    fn witness_trees_project_to_solutions_p3() {
        let g = p3();
        let nd = p3_nd();
        let index = designated_index(&nd).unwrap();
        // ell = 2: only independent set of size 2 is {1,3}.
        let core = IndependentSetCore { ell: 2 };
        let tables = run_tables(&core, &nd);
        let (trees, overflow) = enumerate_witness_trees(&core, &nd, &tables, 1000);
        assert!(overflow.is_none());
        let sols: BTreeSet<SolutionTuple> = trees
            .iter()
            .map(|wt| extract_solution(&core, &index, wt))
            .collect();
        let expect: BTreeSet<SolutionTuple> =
            [SolutionTuple::single_vertex_set([1, 3].into_iter().collect())]
                .into_iter()
                .collect();
        assert_eq!(sols, expect);
        // All root witnesses of these trees are (emptyset, 2).
        for wt in &trees {
            let mut d = Dec::new(&wt.assignment[nd.root()]);
            assert!(d.set().is_empty());
            assert_eq!(d.u32(), 2);
        }
        let _ = g;
    }

    #[test]
    fn witness_trees_match_oracle_p3_ell_1() {
        let g = p3();
        let nd = p3_nd();
        let index = designated_index(&nd).unwrap();
        let spec = ProblemSpec::independent_set(1);
        let core = IndependentSetCore { ell: 1 };
        let report =
            check_solution_preserving(&core, &nd, &index, &g, &spec, 10_000, 1 << 20).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.solution_count, 4);
    }

    #[test]
    fn not_accepted_instance_has_no_trees() {
        let nd = p3_nd();
        let core = IndependentSetCore { ell: 3 };
        let tables = run_tables(&core, &nd);
        let (trees, overflow) = enumerate_witness_trees(&core, &nd, &tables, 10);
        assert!(trees.is_empty() && overflow.is_none());
    }

    #[test]
    fn overflow_signal() {
        let nd = p3_nd();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        let (trees, overflow) = enumerate_witness_trees(&core, &nd, &tables, 2);
        assert_eq!(trees.len(), 2);
        assert!(overflow.is_some());
    }

    #[test]
    fn extraction_example_p3() {
        // Witness tree with W(u3)=({1},1), W(u6)=({3},2), W(u7)=({3},2)
        // extracts X = {1,3}.
        let nd = p3_nd();
        let index = designated_index(&nd).unwrap();
        let core = IndependentSetCore { ell: 2 };
        let tables = run_tables(&core, &nd);
        let (trees, _) = enumerate_witness_trees(&core, &nd, &tables, 1000);
        let wt = trees
            .iter()
            .find(|wt| {
                wt.assignment[3] == is_witness(&[1], 1)
                    && wt.assignment[6] == is_witness(&[3], 2)
                    && wt.assignment[7] == is_witness(&[3], 2)
            })
            .expect("the hand-built witness tree exists");
        let x = extract_solution(&core, &index, wt);
        assert_eq!(
            x,
            SolutionTuple::single_vertex_set([1, 3].into_iter().collect())
        );
    }

    /// Table semantics for the IS core: (S,c) is in Gamma(u) iff the subgraph
    /// with the vertices seen below u and the edges introduced below u has an
    /// independent set I of size exactly c with I intersect bag = S. (The
    /// counters are exact; an IS of size >= c with the same trace exists iff
    /// one of size c does, provided c >= |S|.)
    #[test]
    fn is_table_semantics_small_graphs() {
        for text in ["p 3 2\ne 1 2\ne 2 3\n", "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n"] {
            let g = Graph::parse(text).unwrap();
            let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
            let core = IndependentSetCore { ell: 0 };
            let tables = run_tables(&core, &nd);
            // Gather, per node, the vertices and edges of its subtree.
            let mut verts: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nd.len()];
            let mut edges: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nd.len()];
            for u in nd.tree.bottom_up() {
                let mut vs = nd.bags[u].clone();
                let mut es = Vec::new();
                for &c in nd.tree.children(u) {
                    vs.extend(verts[c].iter().copied());
                    es.extend(edges[c].iter().copied());
                }
                if let NodeKind::IntroEdge(_, a, b) = nd.kinds[u] {
                    es.push((a, b));
                }
                verts[u] = vs;
                edges[u] = es;
            }
            for u in nd.tree.bottom_up() {
                let vu: Vec<u32> = verts[u].iter().copied().collect();
                let mut expect: BTreeSet<Witness> = BTreeSet::new();
                for mask in 0u32..(1 << vu.len()) {
                    let i: BTreeSet<u32> = vu
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect();
                    if edges[u].iter().any(|(a, b)| i.contains(a) && i.contains(b)) {
                        continue;
                    }
                    let s: BTreeSet<u32> = i.intersection(&nd.bags[u]).copied().collect();
                    expect.insert(Enc::new().set(&s).u32(i.len() as u32).finish());
                }
                let got: BTreeSet<Witness> = tables.gamma[u].iter().cloned().collect();
                assert_eq!(got, expect, "node {u}");
            }
        }
    }

    #[test]
    fn set_extension_is_union_of_elements() {
        let core = IndependentSetCore { ell: 0 };
        let set: BTreeSet<Witness> =
            [is_witness(&[1], 1), is_witness(&[], 0)].into_iter().collect();
        let bulk = apply_unary_to_set(|w| core.intro_vertex(3, w), &set);
        let mut manual = BTreeSet::new();
        for w in &set {
            manual.extend(core.intro_vertex(3, w));
        }
        assert_eq!(bulk, manual);
        assert_eq!(bulk.len(), 4);
    }

    #[test]
    fn table_ceilings_hold_on_p3() {
        let g = p3();
        let nd = p3_nd();
        let k = nd.width();
        let cores: Vec<Box<dyn DpCore>> = vec![
            Box::new(IndependentSetCore { ell: 1 }),
            Box::new(DominatingSetCore { ell: 3, uncorrected: false }),
            Box::new(CutCore::new(1, &g)),
            Box::new(HamiltonianCycleCore),
            Box::new(ColoringCore { d: 2 }),
        ];
        for core in &cores {
            let tables = run_tables(core.as_ref(), &nd);
            if let Some(ceiling) = core.table_ceiling(k, g.n(), g.m()) {
                assert!(
                    (tables.max_table_size as u128) <= ceiling,
                    "{}: {} > {}",
                    core.name(),
                    tables.max_table_size,
                    ceiling
                );
            }
        }
    }

    #[test]
    fn ds_literal_fails_on_k2() {
        // The literal intro rule books the count on the wrong branch, which
        // admits a witness tree projecting to an oversized set.
        let k2 = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let nd = make_nice(&k2, &build_heuristic_td(&k2)).unwrap();
        let index = designated_index(&nd).unwrap();
        let spec = ProblemSpec::dominating_set(1);
        let literal = DominatingSetCore { ell: 1, uncorrected: true };
        let report =
            check_solution_preserving(&literal, &nd, &index, &k2, &spec, 10_000, 1 << 20)
                .unwrap();
        assert!(!report.extracted_all_solutions);
        assert!(report
            .bogus_extractions
            .contains(&SolutionTuple::single_vertex_set([1, 2].into_iter().collect())));
        let corrected = DominatingSetCore { ell: 1, uncorrected: false };
        let report =
            check_solution_preserving(&corrected, &nd, &index, &k2, &spec, 10_000, 1 << 20)
                .unwrap();
        assert!(report.holds());
    }

    #[test]
    fn hc_literal_fails_on_triangle() {
        let k3 = Graph::parse("p 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        let nd = make_nice(&k3, &build_heuristic_td(&k3)).unwrap();
        let index = designated_index(&nd).unwrap();
        let spec = ProblemSpec::hamiltonian_cycle();
        let literal = UncorrectedHamiltonianCycleCore::new(&k3);
        let report =
            check_solution_preserving(&literal, &nd, &index, &k3, &spec, 10_000, 1 << 20)
                .unwrap();
        assert!(!report.all_solutions_extracted, "{report:?}");
        let corrected = HamiltonianCycleCore;
        let report =
            check_solution_preserving(&corrected, &nd, &index, &k3, &spec, 10_000, 1 << 20)
                .unwrap();
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn cut_core_k2_single_cut() {
        let k2 = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let nd = make_nice(&k2, &build_heuristic_td(&k2)).unwrap();
        let index = designated_index(&nd).unwrap();
        let spec = ProblemSpec::cut(1);
        let core = CutCore::new(1, &k2);
        let report =
            check_solution_preserving(&core, &nd, &index, &k2, &spec, 10_000, 1 << 20).unwrap();
        assert!(report.holds(), "{report:?}");
        // The one solution is the cut {e1}, recorded at eps(e).
        let tables = run_tables(&core, &nd);
        let (trees, _) = enumerate_witness_trees(&core, &nd, &tables, 100);
        let ys: BTreeSet<SolutionTuple> = trees
            .iter()
            .map(|wt| extract_solution(&core, &index, wt))
            .collect();
        assert!(ys.contains(&SolutionTuple::single_edge_set([1].into_iter().collect())));
    }

    #[test]
    fn coloring_core_counts_partitions() {
        let g = p3();
        let nd = p3_nd();
        let index = designated_index(&nd).unwrap();
        let spec = ProblemSpec::coloring(2);
        let core = ColoringCore { d: 2 };
        let report =
            check_solution_preserving(&core, &nd, &index, &g, &spec, 10_000, 1 << 20).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.solution_count, 2); // 1,3 vs 2 in either order
    }

    #[test]
    fn hc_corrected_handles_join_closure() {
        // K33's min-fill decomposition splits every Hamiltonian cycle across
        // joins, so the cycle must be allowed to close at a join.
        let mut lines = vec!["p 6 9".to_string()];
        for u in 1..=3u32 {
            for v in 4..=6u32 {
                lines.push(format!("e {u} {v}"));
            }
        }
        let k33 = Graph::parse(&(lines.join("\n") + "\n")).unwrap();
        let nd = make_nice(&k33, &build_heuristic_td(&k33)).unwrap();
        assert!(
            nd.kinds.iter().filter(|k| matches!(k, NodeKind::Join)).count() >= 2,
            "expected joins in the K33 decomposition"
        );
        let index = designated_index(&nd).unwrap();
        let spec = ProblemSpec::hamiltonian_cycle();
        let core = HamiltonianCycleCore;
        let report =
            check_solution_preserving(&core, &nd, &index, &k33, &spec, 100_000, 1 << 20)
                .unwrap();
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn acceptance_matches_oracle_nonemptiness() {
        let graphs = [
            "p 3 2\ne 1 2\ne 2 3\n",
            "p 3 3\ne 1 2\ne 2 3\ne 1 3\n",
            "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n",
            "p 1 0\n",
        ];
        for text in graphs {
            let g = Graph::parse(text).unwrap();
            let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
            let mut specs = vec![
                ProblemSpec::independent_set(2),
                ProblemSpec::dominating_set(1),
                ProblemSpec::cut(2),
                ProblemSpec::hamiltonian_cycle(),
                ProblemSpec::coloring(2),
            ];
            specs.push(ProblemSpec::coloring(3));
            for spec in specs {
                let core = core_for(&spec, &g, false);
                let tables = run_tables(core.as_ref(), &nd);
                let oracle = brute_force_solutions(&g, &spec, 1 << 20).unwrap();
                assert_eq!(
                    tables.accepted,
                    !oracle.is_empty(),
                    "{text:?} {spec}"
                );
            }
        }
    }

    #[test]
    fn designated_membership_is_consistent() {
        // mu evaluated anywhere else than the designated node would be wrong;
        // spot-check that nu maps into nodes whose bags contain the vertex.
        let nd = p3_nd();
        let index = designated_index(&nd).unwrap();
        for (&v, &node) in &index.nu {
            assert!(nd.bags[node].contains(&v));
        }
        let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &node in index.nu.values() {
            *counts.entry(node).or_insert(0) += 1;
        }
        assert!(counts.values().all(|&c| c == 1), "nu must be injective");
    }
}
