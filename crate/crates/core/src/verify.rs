//! Exact-rational verification of the formulation: feasibility checking,
//! reading traces off integral vectors, extracting an integral vector inside
//! the support of a fractional one, and the constructive convex
//! decomposition of feasible vectors into accepting-trace vertices.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::automaton::{TShapedAutomaton, Term, Trace, Transition};
use crate::formulation::{
    trace_vector, Constraint, LinearSystem, RationalVector, Relation, VarKey,
};
use crate::rational::{rat, Rat};

/// One violated row, with its family number and exact residual (lhs - rhs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub family: u8,
    pub row: usize,
    pub residual: Rat,
}

fn row_residual(c: &Constraint, v: &RationalVector) -> Option<Rat> {
    let mut lhs = rat(0);
    for (k, coef) in &c.coeffs {
        let val = v.get(k);
        if !val.is_zero() {
            lhs += coef.clone() * val;
        }
    }
    let residual = lhs - c.rhs.clone();
    let violated = match c.relation {
        Relation::Eq => !residual.is_zero(),
        Relation::Le => residual.is_positive(),
        Relation::Ge => residual.is_negative(),
    };
    violated.then_some(residual)
}

/// Exhaustive exact feasibility check: empty list iff `v` satisfies every
/// row. Rows that cannot be violated by a sparse vector (zero intersection
/// with the support and zero right-hand side) are skipped by construction.
pub fn check_feasible(sys: &LinearSystem, v: &RationalVector) -> Vec<Violation> {
    let mut rows_by_var: BTreeMap<VarKey, Vec<usize>> = BTreeMap::new();
    for (i, c) in sys.constraints.iter().enumerate() {
        for (k, _) in &c.coeffs {
            rows_by_var.entry(*k).or_default().push(i);
        }
    }
    let mut candidates: BTreeSet<usize> = BTreeSet::new();
    for k in v.support() {
        if let Some(rows) = rows_by_var.get(k) {
            candidates.extend(rows.iter().copied());
        }
    }
    for (i, c) in sys.constraints.iter().enumerate() {
        if !c.rhs.is_zero() && c.relation != Relation::Le {
            candidates.insert(i);
        }
    }
    let mut out = Vec::new();
    for i in candidates {
        let c = &sys.constraints[i];
        if let Some(residual) = row_residual(c, v) {
            out.push(Violation { family: c.family.number(), row: i, residual });
        }
    }
    out
}

/// Per-node sums over the state, transition, and main variable groups.
/// Every feasible vector has all three sums equal to 1 at every node.
pub fn per_node_sums(sys: &LinearSystem, v: &RationalVector) -> Vec<(Rat, Rat, Rat)> {
    let nodes = sys.sizes.nodes;
    let mut sums = vec![(rat(0), rat(0), rat(0)); nodes];
    for k in &sys.vars {
        let val = v.get(k);
        if val.is_zero() {
            continue;
        }
        match *k {
            VarKey::Main(u, _) => sums[u].2 += val,
            VarKey::State(u, _) => sums[u].0 += val,
            VarKey::Trans(u, _) => sums[u].1 += val,
        }
    }
    sums
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("vector entry {var} = {value} is not 0/1")]
    NotZeroOne { var: String, value: String },
    #[error("vector is infeasible: {count} violated rows, first in family ({family})")]
    Infeasible { count: usize, family: u8 },
    #[error("node {node} does not carry exactly one positive {kind} entry")]
    NotUnitValued { node: usize, kind: &'static str },
    #[error("no final root state with positive value")]
    NoPositiveFinal,
}

fn infeasible(violations: &[Violation]) -> VerifyError {
    VerifyError::Infeasible {
        count: violations.len(),
        family: violations.first().map(|v| v.family).unwrap_or(0),
    }
}

/// Reads the unique per-node (symbol, state, transition) triple of a 0/1
/// feasible vector and returns the induced term and accepting trace.
/// `trace_vector` of the result reproduces the input exactly.
pub fn integral_to_trace(
    a: &TShapedAutomaton,
    sys: &LinearSystem,
    v: &RationalVector,
) -> Result<(Term, Trace), VerifyError> {
    for (k, val) in v.iter() {
        if !val.is_zero() && !val.is_one() {
            return Err(VerifyError::NotZeroOne {
                var: k.name(),
                value: val.to_string(),
            });
        }
    }
    let violations = check_feasible(sys, v);
    if !violations.is_empty() {
        return Err(infeasible(&violations));
    }
    let n = a.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut states = vec![usize::MAX; n];
    for (k, val) in v.iter() {
        if !val.is_one() {
            continue;
        }
        match *k {
            VarKey::Main(u, s) => {
                if labels[u] != usize::MAX {
                    return Err(VerifyError::NotUnitValued { node: u, kind: "symbol" });
                }
                labels[u] = s;
            }
            VarKey::State(u, q) => {
                if states[u] != usize::MAX {
                    return Err(VerifyError::NotUnitValued { node: u, kind: "state" });
                }
                states[u] = q;
            }
            VarKey::Trans(..) => {}
        }
    }
    for u in 0..n {
        if labels[u] == usize::MAX {
            return Err(VerifyError::NotUnitValued { node: u, kind: "symbol" });
        }
        if states[u] == usize::MAX {
            return Err(VerifyError::NotUnitValued { node: u, kind: "state" });
        }
    }
    let term = Term { labels };
    let trace = Trace { states };
    debug_assert_eq!(trace_vector(a, &term, &trace).as_ref(), Ok(v));
    Ok((term, trace))
}

/// Root-to-leaves selection of an integral feasible vector whose support is
/// contained in the support of `v` (strictly, when `v` is fractional): pick
/// a positive final root state, a positive incoming transition for it, its
/// symbol, and descend through the transition's antecedents. Ties break on
/// the lowest index.
pub fn extract_integral_subsolution(
    a: &TShapedAutomaton,
    sys: &LinearSystem,
    v: &RationalVector,
) -> Result<RationalVector, VerifyError> {
    let (term, trace) = select_subtrace(a, sys, v)?;
    let vec = trace_vector(a, &term, &trace).expect("selected assignment is a trace");
    debug_assert!(vec.support().all(|k| !v.get(k).is_zero()));
    Ok(vec)
}

fn select_subtrace(
    a: &TShapedAutomaton,
    sys: &LinearSystem,
    v: &RationalVector,
) -> Result<(Term, Trace), VerifyError> {
    let violations = check_feasible(sys, v);
    if !violations.is_empty() {
        return Err(infeasible(&violations));
    }
    let n = a.node_count();
    let root = a.root();
    let mut states = vec![usize::MAX; n];
    let mut labels = vec![usize::MAX; n];
    states[root] = *a
        .finals
        .iter()
        .find(|&&q| v.get(&VarKey::State(root, q)).is_positive())
        .ok_or(VerifyError::NoPositiveFinal)?;
    for u in (0..n).rev() {
        let q = states[u];
        debug_assert_ne!(q, usize::MAX, "parents are processed first");
        let (t, tr) = a.transitions[u]
            .iter()
            .enumerate()
            .find(|(t, tr)| {
                tr.consequent == q && v.get(&VarKey::Trans(u, *t)).is_positive()
            })
            .expect("a positive state has a positive incoming transition");
        labels[u] = tr.symbol;
        debug_assert!(v.get(&VarKey::Main(u, tr.symbol)).is_positive());
        for (&qc, &c) in tr.antecedents.iter().zip(a.shape.children(u)) {
            states[c] = qc;
        }
        let _ = t;
    }
    Ok((Term { labels }, Trace { states }))
}

/// A convex decomposition of a feasible vector into accepting traces.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// (weight, term, trace), weights positive and summing to one, traces
    /// pairwise distinct; the weighted trace vectors reproduce the input.
    pub parts: Vec<(Rat, Term, Trace)>,
}

impl Decomposition {
    pub fn weight_sum(&self) -> Rat {
        self.parts.iter().fold(rat(0), |acc, (w, _, _)| acc + w.clone())
    }

    pub fn reconstruct(&self, a: &TShapedAutomaton) -> RationalVector {
        let mut acc = RationalVector::new();
        for (w, term, trace) in &self.parts {
            let tv = trace_vector(a, term, trace).expect("part is a trace");
            acc = acc.add_scaled(w, &tv);
        }
        acc
    }
}

/// Repeatedly extracts an integral sub-vector, peels it off with the minimum
/// weight on its support, and rescales, until the remainder is itself
/// integral. The iteration count is bounded by the support size (the support
/// shrinks strictly each round).
pub fn decompose(
    a: &TShapedAutomaton,
    sys: &LinearSystem,
    v: &RationalVector,
) -> Result<Decomposition, VerifyError> {
    let mut remaining = v.clone();
    let mut multiplier = rat(1);
    let mut parts: Vec<(Rat, Term, Trace)> = Vec::new();
    let support_bound = v.support_len();
    loop {
        assert!(
            parts.len() <= support_bound,
            "decomposition exceeded the support-size bound"
        );
        let (term, trace) = select_subtrace(a, sys, &remaining)?;
        let mu_star = trace_vector(a, &term, &trace).expect("selected assignment is a trace");
        if remaining == mu_star {
            parts.push((multiplier, term, trace));
            break;
        }
        let alpha = mu_star
            .support()
            .map(|k| remaining.get(k))
            .min()
            .expect("trace support is nonempty");
        debug_assert!(alpha.is_positive() && alpha < rat(1));
        parts.push((multiplier.clone() * alpha.clone(), term, trace));
        let one_minus = rat(1) - alpha.clone();
        remaining = remaining
            .sub_scaled(&alpha, &mu_star)
            .scale(&(rat(1) / one_minus.clone()));
        multiplier *= one_minus;
    }
    Ok(Decomposition { parts })
}

/// Convenience: the transition taken at a node by a trace on a term.
pub fn transition_of(a: &TShapedAutomaton, t: &Term, trace: &Trace, u: usize) -> Transition {
    Transition {
        consequent: trace.states[u],
        antecedents: a.shape.children(u).iter().map(|&c| trace.states[c]).collect(),
        symbol: t.labels[u],
    }
}

/// Checks the non-Bounds groups sum to one at every node; used on feasible
/// vectors alongside `check_feasible`.
pub fn all_node_sums_are_one(sys: &LinearSystem, v: &RationalVector) -> bool {
    per_node_sums(sys, v)
        .iter()
        .all(|(y, z, x)| y.is_one() && z.is_one() && x.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{accepts_term, build_automaton, characteristic_tree, enumerate_language};
    use crate::cores::{run_tables, IndependentSetCore};
    use crate::decomposition::{build_heuristic_td, designated_index, make_nice};
    use crate::formulation::build_system;
    use crate::graph::{Graph, SolutionTuple};
    use crate::rational::rat_frac;

    struct Setup {
        a: TShapedAutomaton,
        sys: LinearSystem,
        terms: Vec<Term>,
    }

    fn p3_setup(ell: u32) -> Setup {
        let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let core = IndependentSetCore { ell };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let terms: Vec<Term> = enumerate_language(&a, 10_000).unwrap().into_iter().collect();
        Setup { a, sys, terms }
    }

    fn vector_of(s: &Setup, i: usize) -> RationalVector {
        let trace = accepts_term(&s.a, &s.terms[i]).unwrap().unwrap();
        trace_vector(&s.a, &s.terms[i], &trace).unwrap()
    }

    #[test]
    fn trace_vectors_are_feasible() {
        let s = p3_setup(1);
        assert_eq!(s.terms.len(), 4);
        for i in 0..s.terms.len() {
            let v = vector_of(&s, i);
            assert!(check_feasible(&s.sys, &v).is_empty());
            assert!(all_node_sums_are_one(&s.sys, &v));
        }
    }

    #[test]
    fn zero_vector_violates_final_row() {
        let s = p3_setup(1);
        let violations = check_feasible(&s.sys, &RationalVector::new());
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].family, 3);
    }

    #[test]
    fn midpoints_are_feasible() {
        let s = p3_setup(1);
        let v = vector_of(&s, 0)
            .scale(&rat_frac(1, 2))
            .add_scaled(&rat_frac(1, 2), &vector_of(&s, 1));
        assert!(check_feasible(&s.sys, &v).is_empty());
        assert!(all_node_sums_are_one(&s.sys, &v));
    }

    #[test]
    fn integral_to_trace_round_trip() {
        let s = p3_setup(1);
        for i in 0..s.terms.len() {
            let v = vector_of(&s, i);
            let (term, trace) = integral_to_trace(&s.a, &s.sys, &v).unwrap();
            assert_eq!(term, s.terms[i]);
            assert_eq!(trace_vector(&s.a, &term, &trace).unwrap(), v);
        }
    }

    #[test]
    fn integral_to_trace_rejects_fractional_and_infeasible() {
        let s = p3_setup(1);
        let half = vector_of(&s, 0).scale(&rat_frac(1, 2));
        assert!(matches!(
            integral_to_trace(&s.a, &s.sys, &half),
            Err(VerifyError::NotZeroOne { .. })
        ));
        // A 0/1 vector that breaks a consequent row: flip one transition off.
        let mut broken = vector_of(&s, 0);
        let key = *broken
            .support()
            .find(|k| matches!(k, VarKey::Trans(..)))
            .unwrap();
        broken.set(key, rat(0));
        assert!(matches!(
            integral_to_trace(&s.a, &s.sys, &broken),
            Err(VerifyError::Infeasible { .. })
        ));
    }

    #[test]
    fn subsolution_of_integral_is_identity() {
        let s = p3_setup(1);
        let v = vector_of(&s, 2);
        assert_eq!(extract_integral_subsolution(&s.a, &s.sys, &v).unwrap(), v);
    }

    #[test]
    fn subsolution_of_midpoint_is_a_component() {
        let s = p3_setup(1);
        let v0 = vector_of(&s, 0);
        let v1 = vector_of(&s, 1);
        let mid = v0.scale(&rat_frac(1, 2)).add_scaled(&rat_frac(1, 2), &v1);
        let sub = extract_integral_subsolution(&s.a, &s.sys, &mid).unwrap();
        assert!(sub == v0 || sub == v1);
        assert!(check_feasible(&s.sys, &sub).is_empty());
        // Strict support containment for a fractional input.
        assert!(sub.support_len() < mid.support_len());
    }

    #[test]
    fn decompose_single_trace() {
        let s = p3_setup(1);
        let v = vector_of(&s, 3);
        let d = decompose(&s.a, &s.sys, &v).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert!(d.parts[0].0.is_one());
        assert_eq!(d.reconstruct(&s.a), v);
    }

    #[test]
    fn decompose_midpoint() {
        let s = p3_setup(1);
        let v0 = vector_of(&s, 0);
        let v1 = vector_of(&s, 1);
        let mid = v0.scale(&rat_frac(1, 2)).add_scaled(&rat_frac(1, 2), &v1);
        let d = decompose(&s.a, &s.sys, &mid).unwrap();
        assert_eq!(d.parts.len(), 2);
        for (w, _, _) in &d.parts {
            assert_eq!(*w, rat_frac(1, 2));
        }
        assert_eq!(d.reconstruct(&s.a), mid);
        assert!(d.weight_sum().is_one());
    }

    #[test]
    fn decompose_random_combination_reconstructs() {
        let s = p3_setup(1);
        // 2/7 v0 + 4/7 v1 + 1/7 v2.
        let v = vector_of(&s, 0)
            .scale(&rat_frac(2, 7))
            .add_scaled(&rat_frac(4, 7), &vector_of(&s, 1))
            .add_scaled(&rat_frac(1, 7), &vector_of(&s, 2));
        assert!(check_feasible(&s.sys, &v).is_empty());
        let d = decompose(&s.a, &s.sys, &v).unwrap();
        assert_eq!(d.reconstruct(&s.a), v);
        assert!(d.weight_sum().is_one());
        assert!(d.parts.len() <= v.support_len());
        for (w, term, trace) in &d.parts {
            assert!(w.is_positive());
            let tv = trace_vector(&s.a, term, trace).unwrap();
            assert!(check_feasible(&s.sys, &tv).is_empty());
        }
        // Parts are pairwise distinct traces.
        for i in 0..d.parts.len() {
            for j in i + 1..d.parts.len() {
                assert!(d.parts[i].2 != d.parts[j].2 || d.parts[i].1 != d.parts[j].1);
            }
        }
    }

    #[test]
    fn characteristic_vectors_satisfy_system() {
        // Tie the whole pipeline together once: oracle solution -> term ->
        // trace -> vector -> feasibility.
        let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let s = p3_setup(1);
        let x = SolutionTuple::single_vertex_set([2].into_iter().collect());
        let term = characteristic_tree(&nd, &index, &s.a.alphabet, &x).unwrap();
        let trace = accepts_term(&s.a, &term).unwrap().unwrap();
        let v = trace_vector(&s.a, &term, &trace).unwrap();
        assert!(check_feasible(&s.sys, &v).is_empty());
    }
}
