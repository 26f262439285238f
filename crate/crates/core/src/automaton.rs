//! Tree-shaped terms and automata: characteristic trees of solutions, the
//! automaton read off a DP table run, acceptance traces, and language
//! enumeration.
//!
//! The label alphabet has one collapsed vertex coordinate (0 = not selected,
//! i = selected into the i-th vertex component; a partition makes exactly one
//! indicator fire) plus one 0/1 coordinate per edge component. A node's label
//! is live only at designated nodes: the child of a forget node carries the
//! forgotten vertex's membership, an intro-edge node carries the introduced
//! edge's membership, and every other node carries the all-zero symbol.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cores::{DpCore, Tables};
use crate::decomposition::{AddressedTree, DesignatedIndex, NiceDecomposition, NodeId, NodeKind};
use crate::graph::SolutionTuple;
use crate::witness::Witness;

pub type SymbolId = usize;

/// The symbol set for a (d1, d2)-ary problem, enumerated in lexicographic
/// value order so the all-zero symbol has index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    /// Number of values of the collapsed vertex coordinate (0 if absent).
    pub vertex_values: u32,
    /// Number of 0/1 edge coordinates.
    pub edge_channels: usize,
    symbols: Vec<Vec<u8>>,
}

impl Alphabet {
    pub fn for_arity(d1: usize, d2: usize) -> Self {
        let vertex_values = if d1 > 0 { d1 as u32 + 1 } else { 0 };
        let mut symbols: Vec<Vec<u8>> = vec![vec![]];
        if d1 > 0 {
            let mut next = Vec::new();
            for s in &symbols {
                for v in 0..=d1 as u8 {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            symbols = next;
        }
        for _ in 0..d2 {
            let mut next = Vec::new();
            for s in &symbols {
                for v in 0..=1u8 {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            symbols = next;
        }
        symbols.sort();
        Alphabet { vertex_values, edge_channels: d2, symbols }
    }

    pub fn for_core(core: &dyn DpCore) -> Self {
        let (d1, d2) = core.arity();
        Alphabet::for_arity(d1, d2)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: SymbolId) -> &[u8] {
        &self.symbols[i]
    }

    pub fn index_of(&self, sym: &[u8]) -> Option<SymbolId> {
        self.symbols.binary_search_by(|s| s.as_slice().cmp(sym)).ok()
    }

    pub const ZERO: SymbolId = 0;
}

/// A T-shaped term: one symbol per node of a fixed tree shape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub labels: Vec<SymbolId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("term shape mismatch: automaton has {expected} nodes, term has {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("element {element} of component {component} has no designated node")]
    NoDesignatedNode { component: usize, element: u32 },
    #[error("language enumeration overflowed the limit of {limit}")]
    Overflow { limit: usize },
}

/// The characteristic tree of a solution: component memberships at the
/// designated nodes, all-zero labels elsewhere.
pub fn characteristic_tree(
    nd: &NiceDecomposition,
    index: &DesignatedIndex,
    alphabet: &Alphabet,
    x: &SolutionTuple,
) -> Result<Term, AutomatonError> {
    let d1 = x.vertex_sets.len();
    let d2 = x.edge_sets.len();
    let sym_len = usize::from(d1 > 0) + d2;
    let mut raw: Vec<Vec<u8>> = vec![vec![0; sym_len]; nd.len()];
    for (i, set) in x.vertex_sets.iter().enumerate() {
        for &v in set {
            let &node = index
                .nu
                .get(&v)
                .ok_or(AutomatonError::NoDesignatedNode { component: i, element: v })?;
            debug_assert_eq!(raw[node][0], 0, "one vertex indicator per designated node");
            raw[node][0] = i as u8 + 1;
        }
    }
    for (j, set) in x.edge_sets.iter().enumerate() {
        let coord = usize::from(d1 > 0) + j;
        for &e in set {
            let &node = index
                .eps
                .get(&e)
                .ok_or(AutomatonError::NoDesignatedNode { component: d1 + j, element: e })?;
            raw[node][coord] = 1;
        }
    }
    let labels = raw
        .into_iter()
        .map(|sym| alphabet.index_of(&sym).expect("symbol in alphabet"))
        .collect();
    Ok(Term { labels })
}

/// Inverse of [`characteristic_tree`]: reads the solution tuple off a term's
/// designated-node labels.
pub fn term_to_solution(
    index: &DesignatedIndex,
    alphabet: &Alphabet,
    d1: usize,
    d2: usize,
    term: &Term,
) -> SolutionTuple {
    let mut vertex_sets = vec![BTreeSet::new(); d1];
    for (&v, &node) in &index.nu {
        if d1 == 0 {
            break;
        }
        let sym = alphabet.get(term.labels[node]);
        let val = sym[0];
        if val > 0 {
            vertex_sets[val as usize - 1].insert(v);
        }
    }
    let mut edge_sets = vec![BTreeSet::new(); d2];
    for (&e, &node) in &index.eps {
        for (j, set) in edge_sets.iter_mut().enumerate() {
            let coord = usize::from(d1 > 0) + j;
            if alphabet.get(term.labels[node])[coord] == 1 {
                set.insert(e);
            }
        }
    }
    SolutionTuple { vertex_sets, edge_sets }
}

/// One transition of Delta_u: antecedent states (cell-local indices, in
/// child order), the symbol, and the consequent state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub consequent: usize,
    pub antecedents: Vec<usize>,
    pub symbol: SymbolId,
}

/// Tree automaton whose state set is partitioned into one cell per node of
/// the decomposition tree. States are (node, cell index) pairs; the cell
/// order is the canonical witness byte order.
#[derive(Debug, Clone)]
pub struct TShapedAutomaton {
    pub shape: AddressedTree,
    pub alphabet: Alphabet,
    /// Q_u: the witness behind each state, sorted by canonical bytes.
    pub cells: Vec<Vec<Witness>>,
    /// Final states as indices into the root cell.
    pub finals: BTreeSet<usize>,
    /// Delta_u, sorted by (consequent, antecedents, symbol).
    pub transitions: Vec<Vec<Transition>>,
}

impl TShapedAutomaton {
    pub fn width(&self) -> usize {
        self.cells.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn state_count(&self) -> usize {
        self.cells.iter().map(|c| c.len()).sum()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().map(|t| t.len()).sum()
    }

    pub fn root(&self) -> NodeId {
        self.shape.root()
    }

    pub fn node_count(&self) -> usize {
        self.shape.len()
    }

    /// The same automaton with a different final set: acceptance variants of
    /// one table run (thresholds only move the final predicate).
    pub fn with_finals(&self, finals: BTreeSet<usize>) -> TShapedAutomaton {
        let mut out = self.clone();
        out.finals = finals;
        out
    }
}

/// The symbol a node's transitions carry for a given consequent witness: the
/// forgotten vertex's membership when the node's parent is a forget node,
/// the introduced edge's membership when the node itself introduces an edge,
/// all-zero otherwise.
pub fn designation_label(
    core: &dyn DpCore,
    nd: &NiceDecomposition,
    alphabet: &Alphabet,
    u: NodeId,
    w: &Witness,
) -> SymbolId {
    let (d1, d2) = core.arity();
    let sym_len = usize::from(d1 > 0) + d2;
    let mut sym = vec![0u8; sym_len];
    if d1 > 0 {
        if let Some(p) = nd.tree.parent(u) {
            if let NodeKind::ForgetVertex(v) = nd.kinds[p] {
                let mut fired = 0u8;
                for i in 0..d1 {
                    if core.member(i, v, w) {
                        debug_assert_eq!(fired, 0, "one vertex indicator fires");
                        fired = i as u8 + 1;
                    }
                }
                sym[0] = fired;
            }
        }
    }
    if d2 > 0 {
        if let NodeKind::IntroEdge(e, _, _) = nd.kinds[u] {
            for j in 0..d2 {
                if core.member(d1 + j, e, w) {
                    sym[usize::from(d1 > 0) + j] = 1;
                }
            }
        }
    }
    alphabet.index_of(&sym).expect("symbol in alphabet")
}

/// Builds the automaton of a table run: one state per table witness, finals
/// from the final root witnesses, one transition per (child witnesses ->
/// produced witness) pair, labeled by [`designation_label`].
pub fn build_automaton(
    core: &dyn DpCore,
    nd: &NiceDecomposition,
    tables: &Tables,
) -> TShapedAutomaton {
    let alphabet = Alphabet::for_core(core);
    let label_of =
        |u: NodeId, w: &Witness| -> SymbolId { designation_label(core, nd, &alphabet, u, w) };

    let cells = tables.gamma.clone();
    let mut transitions: Vec<Vec<Transition>> = vec![Vec::new(); nd.len()];
    for u in nd.tree.bottom_up() {
        let mut delta: Vec<Transition> = Vec::new();
        match nd.kinds[u] {
            NodeKind::Leaf => {
                for (i, w) in cells[u].iter().enumerate() {
                    delta.push(Transition {
                        consequent: i,
                        antecedents: vec![],
                        symbol: label_of(u, w),
                    });
                }
            }
            NodeKind::IntroVertex(_) | NodeKind::ForgetVertex(_) | NodeKind::IntroEdge(..) => {
                let child = nd.tree.children(u)[0];
                for (j, w) in cells[child].iter().enumerate() {
                    let succs = match nd.kinds[u] {
                        NodeKind::IntroVertex(v) => core.intro_vertex(v, w),
                        NodeKind::ForgetVertex(v) => core.forget_vertex(v, w),
                        NodeKind::IntroEdge(_, a, b) => core.intro_edge(a, b, w),
                        _ => unreachable!(),
                    };
                    for s in succs {
                        let i = cells[u].binary_search(&s).expect("successor in table");
                        delta.push(Transition {
                            consequent: i,
                            antecedents: vec![j],
                            symbol: label_of(u, &s),
                        });
                    }
                }
            }
            NodeKind::Join => {
                let c1 = nd.tree.children(u)[0];
                let c2 = nd.tree.children(u)[1];
                for (j1, w1) in cells[c1].iter().enumerate() {
                    for (j2, w2) in cells[c2].iter().enumerate() {
                        for s in core.join(w1, w2) {
                            let i = cells[u].binary_search(&s).expect("successor in table");
                            delta.push(Transition {
                                consequent: i,
                                antecedents: vec![j1, j2],
                                symbol: label_of(u, &s),
                            });
                        }
                    }
                }
            }
        }
        delta.sort();
        delta.dedup();
        transitions[u] = delta;
    }
    let finals = cells[nd.root()]
        .iter()
        .enumerate()
        .filter(|(_, w)| core.is_final(w))
        .map(|(i, _)| i)
        .collect();
    TShapedAutomaton {
        shape: nd.tree.clone(),
        alphabet,
        cells,
        finals,
        transitions,
    }
}

/// A per-node state assignment consistent with the transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<usize>,
}

/// Checks whether a trace is valid for the given term: each node's
/// (antecedents, symbol, consequent) tuple must be a transition, and the
/// root state must be final.
pub fn is_accepting_trace(a: &TShapedAutomaton, t: &Term, trace: &Trace) -> bool {
    if t.labels.len() != a.node_count() || trace.states.len() != a.node_count() {
        return false;
    }
    for u in 0..a.node_count() {
        let ants: Vec<usize> =
            a.shape.children(u).iter().map(|&c| trace.states[c]).collect();
        let want = Transition {
            consequent: trace.states[u],
            antecedents: ants,
            symbol: t.labels[u],
        };
        if !a.transitions[u].contains(&want) {
            return false;
        }
    }
    a.finals.contains(&trace.states[a.root()])
}

/// Bottom-up acceptance: returns the lexicographically least accepting trace
/// (by final-state index, then transition order at each node) or None.
pub fn accepts_term(
    a: &TShapedAutomaton,
    t: &Term,
) -> Result<Option<Trace>, AutomatonError> {
    if t.labels.len() != a.node_count() {
        return Err(AutomatonError::ShapeMismatch {
            expected: a.node_count(),
            found: t.labels.len(),
        });
    }
    let n = a.node_count();
    let mut reachable: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        let children = a.shape.children(u);
        for tr in &a.transitions[u] {
            if tr.symbol != t.labels[u] {
                continue;
            }
            if tr
                .antecedents
                .iter()
                .zip(children.iter())
                .all(|(&q, &c)| reachable[c].contains(&q))
            {
                reachable[u].insert(tr.consequent);
            }
        }
    }
    let root = a.root();
    let Some(&start) = a.finals.iter().find(|q| reachable[root].contains(q)) else {
        return Ok(None);
    };
    let mut states = vec![usize::MAX; n];
    states[root] = start;
    // Top-down reconstruction in descending id order (parents first).
    for u in (0..n).rev() {
        let children: Vec<NodeId> = a.shape.children(u).to_vec();
        let tr = a.transitions[u]
            .iter()
            .find(|tr| {
                tr.consequent == states[u]
                    && tr.symbol == t.labels[u]
                    && tr
                        .antecedents
                        .iter()
                        .zip(children.iter())
                        .all(|(&q, &c)| reachable[c].contains(&q))
            })
            .expect("reachable state has a reachable transition");
        for (&q, &c) in tr.antecedents.iter().zip(children.iter()) {
            states[c] = q;
        }
    }
    let trace = Trace { states };
    debug_assert!(is_accepting_trace(a, t, &trace));
    Ok(Some(trace))
}

/// All accepted terms, by bottom-up enumeration of per-state label
/// assignments with deduplication.
pub fn enumerate_language(
    a: &TShapedAutomaton,
    limit: usize,
) -> Result<BTreeSet<Term>, AutomatonError> {
    let by_state = enumerate_language_by_root_state(a, limit)?;
    let mut out = BTreeSet::new();
    for &q in &a.finals {
        out.extend(by_state[q].iter().cloned());
    }
    Ok(out)
}

/// The accepted-term sets per root state (ignoring the final-state filter),
/// so callers can reuse one enumeration across acceptance variants that
/// differ only in the final set. Fragments are stored sparsely as sorted
/// (node, nonzero symbol) lists; post-order ids make sibling concatenation
/// order-preserving.
pub fn enumerate_language_by_root_state(
    a: &TShapedAutomaton,
    limit: usize,
) -> Result<Vec<BTreeSet<Term>>, AutomatonError> {
    type Fragment = Vec<(NodeId, SymbolId)>;
    let n = a.node_count();
    let mut frags: Vec<Vec<BTreeSet<Fragment>>> =
        (0..n).map(|u| vec![BTreeSet::new(); a.cells[u].len()]).collect();
    let mut total: usize = 0;
    for u in 0..n {
        let children: Vec<NodeId> = a.shape.children(u).to_vec();
        for tr in &a.transitions[u] {
            // Cross product of the children's fragment sets.
            let mut combos: Vec<Fragment> = vec![vec![]];
            for (slot, &c) in children.iter().enumerate() {
                let child_frags = &frags[c][tr.antecedents[slot]];
                let mut next = Vec::with_capacity(combos.len() * child_frags.len());
                for prefix in &combos {
                    for f in child_frags {
                        let mut g = prefix.clone();
                        g.extend_from_slice(f);
                        next.push(g);
                    }
                }
                combos = next;
            }
            for mut f in combos {
                if tr.symbol != Alphabet::ZERO {
                    f.push((u, tr.symbol));
                }
                if frags[u][tr.consequent].insert(f) {
                    total += 1;
                    if total > limit {
                        return Err(AutomatonError::Overflow { limit });
                    }
                }
            }
        }
    }
    let root = a.root();
    let mut out: Vec<BTreeSet<Term>> = vec![BTreeSet::new(); a.cells[root].len()];
    for (q, set) in out.iter_mut().enumerate() {
        for f in &frags[root][q] {
            let mut labels = vec![Alphabet::ZERO; n];
            for &(u, s) in f {
                labels[u] = s;
            }
            set.insert(Term { labels });
        }
    }
    Ok(out)
}

pub fn automaton_width(a: &TShapedAutomaton) -> usize {
    a.width()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cores::{run_tables, ColoringCore, CutCore, IndependentSetCore};
    use crate::decomposition::{build_heuristic_td, designated_index, make_nice};
    use crate::graph::{brute_force_solutions, Graph, ProblemSpec};

    fn p3() -> Graph {
        Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap()
    }

    fn p3_setup(ell: u32) -> (Graph, NiceDecomposition, DesignatedIndex, TShapedAutomaton) {
        let g = p3();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = IndependentSetCore { ell };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        (g, nd, index, a)
    }

    #[test]
    fn alphabet_shapes() {
        let a = Alphabet::for_arity(1, 0);
        assert_eq!(a.len(), 2);
        assert_eq!(a.get(0), &[0]);
        assert_eq!(a.get(1), &[1]);
        let c = Alphabet::for_arity(3, 0); // 3-coloring collapsed
        assert_eq!(c.len(), 4);
        let e = Alphabet::for_arity(0, 1);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn p3_automaton_size_and_width() {
        let (_, _, _, a) = p3_setup(1);
        assert_eq!(a.state_count(), 31); // 1+2+4+3+3+6+5+4+3
        assert_eq!(a.width(), 6);
        assert_eq!(a.transition_count(), 33); // 1+2+4+3+3+6+5+5+4
    }

    #[test]
    fn parent_designated_symbol_at_u3() {
        // u3's parent u4 forgets vertex 1, so incoming transitions of the
        // state for ({1},1) at u3 carry symbol 1.
        let (_, _, _, a) = p3_setup(1);
        let core = IndependentSetCore { ell: 1 };
        for tr in &a.transitions[3] {
            let w = &a.cells[3][tr.consequent];
            let expect = usize::from(core.member(0, 1, w));
            assert_eq!(tr.symbol, expect);
        }
        // And u5 (parent forgets nothing: u6 introduces an edge) is all-zero.
        for tr in &a.transitions[5] {
            assert_eq!(tr.symbol, Alphabet::ZERO);
        }
    }

    #[test]
    fn language_equals_characteristic_trees_p3() {
        let (g, nd, index, a) = p3_setup(1);
        let lang = enumerate_language(&a, 10_000).unwrap();
        let oracle =
            brute_force_solutions(&g, &ProblemSpec::independent_set(1), 1 << 20).unwrap();
        let expect: BTreeSet<Term> = oracle
            .iter()
            .map(|x| characteristic_tree(&nd, &index, &a.alphabet, x).unwrap())
            .collect();
        assert_eq!(lang, expect);
        assert_eq!(lang.len(), 4);
    }

    #[test]
    fn language_empty_when_threshold_too_high() {
        let (_, _, _, a) = p3_setup(3);
        let lang = enumerate_language(&a, 10_000).unwrap();
        assert!(lang.is_empty());
    }

    #[test]
    fn accepts_characteristic_tree_of_13() {
        let (_, nd, index, a) = p3_setup(1);
        let x = SolutionTuple::single_vertex_set([1, 3].into_iter().collect());
        let term = characteristic_tree(&nd, &index, &a.alphabet, &x).unwrap();
        // Labels: u3 -> 1, u7 -> 1, zero elsewhere.
        let mut expect = vec![0; 9];
        expect[3] = 1;
        expect[7] = 1;
        assert_eq!(term.labels, expect);
        let trace = accepts_term(&a, &term).unwrap().expect("accepted");
        // The trace passes through ({1},1) at u3 and ({3},2) at u6 and u7.
        let core = IndependentSetCore { ell: 1 };
        assert_eq!(core.describe(&a.cells[3][trace.states[3]]), "({1},1)");
        assert_eq!(core.describe(&a.cells[6][trace.states[6]]), "({3},2)");
        assert_eq!(core.describe(&a.cells[7][trace.states[7]]), "({3},2)");
    }

    #[test]
    fn rejects_non_solution_term() {
        let (_, nd, index, a) = p3_setup(1);
        let x = SolutionTuple::single_vertex_set([1, 2].into_iter().collect());
        let term = characteristic_tree(&nd, &index, &a.alphabet, &x).unwrap();
        assert_eq!(accepts_term(&a, &term).unwrap(), None);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let (_, _, _, a) = p3_setup(1);
        let term = Term { labels: vec![0; 3] };
        assert!(matches!(
            accepts_term(&a, &term),
            Err(AutomatonError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn empty_graph_automaton() {
        let g = Graph::parse("p 0 0\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        assert_eq!(a.node_count(), 1);
        assert_eq!(a.state_count(), 1);
        assert_eq!(a.transitions[0].len(), 1);
        assert!(a.transitions[0][0].antecedents.is_empty());
        let lang = enumerate_language(&a, 10).unwrap();
        assert_eq!(lang.len(), 1); // the all-zero term for the empty solution
    }

    #[test]
    fn width_equals_max_table_size_and_shape_matches() {
        let g = p3();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        for core in [
            Box::new(IndependentSetCore { ell: 0 }) as Box<dyn DpCore>,
            Box::new(CutCore::new(1, &g)),
            Box::new(ColoringCore { d: 2 }),
        ] {
            let tables = run_tables(core.as_ref(), &nd);
            let a = build_automaton(core.as_ref(), &nd, &tables);
            assert_eq!(automaton_width(&a), tables.max_table_size);
            // The automaton's shape is the decomposition tree, node for node.
            assert_eq!(a.shape, nd.tree);
        }
    }

    #[test]
    fn limit_zero_overflows_on_nonempty_language() {
        let (_, _, _, a) = p3_setup(1);
        assert!(matches!(
            enumerate_language(&a, 0),
            Err(AutomatonError::Overflow { limit: 0 })
        ));
    }

    #[test]
    fn coloring_language_round_trips_solutions() {
        let g = p3();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = ColoringCore { d: 2 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let oracle = brute_force_solutions(&g, &ProblemSpec::coloring(2), 1 << 20).unwrap();
        let lang = enumerate_language(&a, 10_000).unwrap();
        let expect: BTreeSet<Term> = oracle
            .iter()
            .map(|x| characteristic_tree(&nd, &index, &a.alphabet, x).unwrap())
            .collect();
        assert_eq!(lang, expect);
        // And the inverse map recovers the solutions.
        let back: BTreeSet<SolutionTuple> = lang
            .iter()
            .map(|t| term_to_solution(&index, &a.alphabet, 2, 0, t))
            .collect();
        assert_eq!(back, oracle);
    }

    #[test]
    fn cut_language_on_k2() {
        let k2 = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let nd = make_nice(&k2, &build_heuristic_td(&k2)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = CutCore::new(1, &k2);
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let lang = enumerate_language(&a, 1000).unwrap();
        // Exactly one solution: the cut {e1}, labeled 1 at eps(e1) = node 3.
        assert_eq!(lang.len(), 1);
        let term = lang.first().unwrap();
        assert_eq!(term.labels[index.eps[&1]], 1);
        assert_eq!(term.labels.iter().filter(|&&s| s != 0).count(), 1);
    }
}
