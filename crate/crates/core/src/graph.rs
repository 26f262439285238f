//! Graph representation, edge-list ingestion, and the brute-force solution
//! oracle used to cross-check everything downstream.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;

/// Simple undirected graph: ordered vertex and edge id sets plus an
/// endpoint map. No self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    endpoints: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line: {text}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: VertexId },
    #[error("line {line}: duplicate edge {{{u},{v}}}")]
    DuplicateEdge { line: usize, u: VertexId, v: VertexId },
    #[error("line {line}: endpoint {v} out of range 1..={n}")]
    EndpointOutOfRange { line: usize, v: VertexId, n: u32 },
    #[error("line {line}: expected {expected} edge lines, found extra content")]
    ExtraContent { line: usize, expected: usize },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("expected {expected} edge lines, found {found}")]
    MissingEdges { expected: usize, found: usize },
    #[error("edge {e}: endpoint {v} is not a declared vertex")]
    UnknownEndpoint { e: EdgeId, v: VertexId },
    #[error("edge {e}: self-loop at vertex {v}")]
    SelfLoopEdge { e: EdgeId, v: VertexId },
    #[error("edges {e1} and {e2} have identical endpoints")]
    ParallelEdges { e1: EdgeId, e2: EdgeId },
}

impl Graph {
    /// Builds a graph from explicit vertex and edge sets, checking every
    /// invariant (declared endpoints, no loops, no parallel edges).
    pub fn new(
        vertices: BTreeSet<VertexId>,
        edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut seen: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
        let mut endpoints = BTreeMap::new();
        for (&e, &(a, b)) in &edges {
            if a == b {
                return Err(GraphError::SelfLoopEdge { e, v: a });
            }
            for v in [a, b] {
                if !vertices.contains(&v) {
                    return Err(GraphError::UnknownEndpoint { e, v });
                }
            }
            let key = (a.min(b), a.max(b));
            if let Some(&e1) = seen.get(&key) {
                return Err(GraphError::ParallelEdges { e1, e2: e });
            }
            seen.insert(key, e);
            endpoints.insert(e, key);
        }
        Ok(Graph {
            vertices,
            endpoints,
        })
    }

    /// Parses the edge-list document format: a `p <n> <m>` header followed by
    /// `m` lines `e <u> <v>`. Vertices are 1..=n, edges numbered 1..=m in
    /// input order.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(u32, usize)> = None;
        let mut edges: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
        let mut seen: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let tag = parts.next().unwrap();
            match tag {
                "p" => {
                    let malformed = || GraphError::Malformed {
                        line,
                        text: raw.to_string(),
                    };
                    if header.is_some() {
                        return Err(malformed());
                    }
                    let n: u32 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                    let m: usize =
                        parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                    if parts.next().is_some() {
                        return Err(malformed());
                    }
                    header = Some((n, m));
                }
                "e" => {
                    let malformed = || GraphError::Malformed {
                        line,
                        text: raw.to_string(),
                    };
                    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
                    if edges.len() == m {
                        return Err(GraphError::ExtraContent { line, expected: m });
                    }
                    let u: u32 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                    let v: u32 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                    if parts.next().is_some() {
                        return Err(malformed());
                    }
                    if u == v {
                        return Err(GraphError::SelfLoop { line, v });
                    }
                    for w in [u, v] {
                        if w == 0 || w > n {
                            return Err(GraphError::EndpointOutOfRange { line, v: w, n });
                        }
                    }
                    let key = (u.min(v), u.max(v));
                    if seen.contains_key(&key) {
                        return Err(GraphError::DuplicateEdge { line, u: key.0, v: key.1 });
                    }
                    seen.insert(key, line);
                    edges.insert(edges.len() as EdgeId + 1, key);
                }
                _ => {
                    return Err(GraphError::Malformed {
                        line,
                        text: raw.to_string(),
                    })
                }
            }
        }
        let (n, m) = header.ok_or(GraphError::MissingHeader)?;
        if edges.len() != m {
            return Err(GraphError::MissingEdges {
                expected: m,
                found: edges.len(),
            });
        }
        Graph::new((1..=n).collect(), edges)
    }

    /// Deterministic serialization back to the edge-list format.
    pub fn to_edge_list(&self) -> String {
        let n = self.vertices.iter().max().copied().unwrap_or(0);
        let mut out = format!("p {} {}\n", n, self.endpoints.len());
        for (_, &(u, v)) in &self.endpoints {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, (VertexId, VertexId))> + '_ {
        self.endpoints.iter().map(|(&e, &p)| (e, p))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.endpoints.keys().copied()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.endpoints.get(&e).copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge_between(&self, u: VertexId, v: VertexId) -> bool {
        let key = (u.min(v), u.max(v));
        self.endpoints.values().any(|&p| p == key)
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &(a, b) in self.endpoints.values() {
            if a == v {
                out.insert(b);
            } else if b == v {
                out.insert(a);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut it = self.vertices.iter();
        let Some(&start) = it.next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

/// Which combinatorial problem a run is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    IndependentSet,
    DominatingSet,
    Cut,
    HamiltonianCycle,
    DColoring,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProblemKind::IndependentSet => "independent-set",
            ProblemKind::DominatingSet => "dominating-set",
            ProblemKind::Cut => "cut",
            ProblemKind::HamiltonianCycle => "hamiltonian-cycle",
            ProblemKind::DColoring => "coloring",
        };
        f.write_str(s)
    }
}

/// Problem instance parameters: the kind, a size threshold `ell` where the
/// kind uses one, and the number of colors `d` for coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub ell: u32,
    pub d: u32,
}

impl ProblemSpec {
    pub fn independent_set(ell: u32) -> Self {
        ProblemSpec { kind: ProblemKind::IndependentSet, ell, d: 0 }
    }

    pub fn dominating_set(ell: u32) -> Self {
        ProblemSpec { kind: ProblemKind::DominatingSet, ell, d: 0 }
    }

    pub fn cut(ell: u32) -> Self {
        ProblemSpec { kind: ProblemKind::Cut, ell, d: 0 }
    }

    pub fn hamiltonian_cycle() -> Self {
        ProblemSpec { kind: ProblemKind::HamiltonianCycle, ell: 0, d: 0 }
    }

    pub fn coloring(d: u32) -> Self {
        assert!(d >= 1, "coloring needs d >= 1");
        ProblemSpec { kind: ProblemKind::DColoring, ell: 0, d }
    }

    /// (d1, d2): how many vertex-set and edge-set components a solution
    /// tuple has.
    pub fn arity(&self) -> (usize, usize) {
        match self.kind {
            ProblemKind::IndependentSet | ProblemKind::DominatingSet => (1, 0),
            ProblemKind::Cut | ProblemKind::HamiltonianCycle => (0, 1),
            ProblemKind::DColoring => (self.d as usize, 0),
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ProblemKind::IndependentSet | ProblemKind::DominatingSet | ProblemKind::Cut => {
                write!(f, "{}(l={})", self.kind, self.ell)
            }
            ProblemKind::HamiltonianCycle => write!(f, "{}", self.kind),
            ProblemKind::DColoring => write!(f, "{}(d={})", self.kind, self.d),
        }
    }
}

/// A candidate or actual solution: d1 vertex sets followed by d2 edge sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionTuple {
    pub vertex_sets: Vec<BTreeSet<VertexId>>,
    pub edge_sets: Vec<BTreeSet<EdgeId>>,
}

impl SolutionTuple {
    pub fn single_vertex_set(s: BTreeSet<VertexId>) -> Self {
        SolutionTuple { vertex_sets: vec![s], edge_sets: vec![] }
    }

    pub fn single_edge_set(s: BTreeSet<EdgeId>) -> Self {
        SolutionTuple { vertex_sets: vec![], edge_sets: vec![s] }
    }
}

impl fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |s: &BTreeSet<u32>| {
            let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        let mut parts: Vec<String> = self.vertex_sets.iter().map(render).collect();
        parts.extend(self.edge_sets.iter().map(render));
        if parts.len() == 1 {
            f.write_str(&parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

/// Evaluates the problem predicate on one candidate tuple.
pub fn is_solution(g: &Graph, spec: &ProblemSpec, x: &SolutionTuple) -> bool {
    let (d1, d2) = spec.arity();
    if x.vertex_sets.len() != d1 || x.edge_sets.len() != d2 {
        return false;
    }
    if x.vertex_sets.iter().flatten().any(|v| !g.contains_vertex(*v)) {
        return false;
    }
    if x.edge_sets.iter().flatten().any(|e| g.endpoints(*e).is_none()) {
        return false;
    }
    match spec.kind {
        ProblemKind::IndependentSet => {
            let s = &x.vertex_sets[0];
            s.len() as u32 >= spec.ell && is_independent(g, s)
        }
        ProblemKind::DominatingSet => {
            let s = &x.vertex_sets[0];
            s.len() as u32 <= spec.ell && is_dominating(g, s)
        }
        ProblemKind::Cut => {
            let y = &x.edge_sets[0];
            y.len() as u32 >= spec.ell && is_cut_set(g, y)
        }
        ProblemKind::HamiltonianCycle => is_hamiltonian_cycle(g, &x.edge_sets[0]),
        ProblemKind::DColoring => {
            // Ordered partition of V into d independent sets; empty parts ok.
            let mut seen: BTreeSet<VertexId> = BTreeSet::new();
            let mut total = 0usize;
            for part in &x.vertex_sets {
                if !is_independent(g, part) {
                    return false;
                }
                total += part.len();
                seen.extend(part.iter().copied());
            }
            total == g.n() && seen.len() == g.n()
        }
    }
}

fn is_independent(g: &Graph, s: &BTreeSet<VertexId>) -> bool {
    g.edges().all(|(_, (u, v))| !(s.contains(&u) && s.contains(&v)))
}

fn is_dominating(g: &Graph, s: &BTreeSet<VertexId>) -> bool {
    g.vertices()
        .all(|v| s.contains(&v) || g.neighbors(v).iter().any(|w| s.contains(w)))
}

/// X is a cut-set iff it equals the cut of some bipartition. Two
/// complementary bipartitions give the same cut-set.
fn is_cut_set(g: &Graph, x: &BTreeSet<EdgeId>) -> bool {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    if n > 25 {
        // Only reachable through is_solution on oversized graphs; the oracle
        // guards sizes with its own budget before getting here.
        panic!("cut predicate limited to 25 vertices");
    }
    for mask in 0u64..(1u64 << n) {
        let side: BTreeSet<VertexId> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        if cut_set_of(g, &side) == *x {
            return true;
        }
    }
    false
}

pub fn cut_set_of(g: &Graph, side: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
    g.edges()
        .filter(|(_, (u, v))| side.contains(u) != side.contains(v))
        .map(|(e, _)| e)
        .collect()
}

fn is_hamiltonian_cycle(g: &Graph, x: &BTreeSet<EdgeId>) -> bool {
    let n = g.n();
    if n < 3 || x.len() != n {
        return false;
    }
    let mut degree: BTreeMap<VertexId, usize> = g.vertices().map(|v| (v, 0)).collect();
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &e in x {
        let Some((u, v)) = g.endpoints(e) else { return false };
        *degree.get_mut(&u).unwrap() += 1;
        *degree.get_mut(&v).unwrap() += 1;
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    if degree.values().any(|&d| d != 2) {
        return false;
    }
    // Degree-2 everywhere and |X| = n: connected iff a single cycle.
    let start = g.vertices().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == n
}

pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget exceeded: instance needs {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

/// Exhaustively enumerates `Sol(g)` for the given problem. This is the
/// independent ground truth every other module is checked against, so it
/// stays as direct as possible: enumerate candidates, apply the predicate.
pub fn brute_force_solutions(
    g: &Graph,
    spec: &ProblemSpec,
    budget: u64,
) -> Result<BTreeSet<SolutionTuple>, OracleError> {
    let n = g.n();
    let m = g.m();
    let verts: Vec<VertexId> = g.vertices().collect();
    let edge_ids: Vec<EdgeId> = g.edge_ids().collect();
    let check = |needed: u128| -> Result<(), OracleError> {
        if needed > budget as u128 {
            Err(OracleError::BudgetExceeded { needed, budget })
        } else {
            Ok(())
        }
    };
    let mut out = BTreeSet::new();
    match spec.kind {
        ProblemKind::IndependentSet | ProblemKind::DominatingSet => {
            check(1u128 << n)?;
            for mask in 0u64..(1u64 << n) {
                let s = mask_to_set(&verts, mask);
                let cand = SolutionTuple::single_vertex_set(s);
                if is_solution(g, spec, &cand) {
                    out.insert(cand);
                }
            }
        }
        ProblemKind::Cut => {
            // Enumerate bipartitions and collect their cut-sets, deduplicating
            // by edge set; complementary sides collapse automatically.
            check(1u128 << n)?;
            for mask in 0u64..(1u64 << n) {
                let side = mask_to_set(&verts, mask);
                let cut = cut_set_of(g, &side);
                if cut.len() as u32 >= spec.ell {
                    out.insert(SolutionTuple::single_edge_set(cut));
                }
            }
        }
        ProblemKind::HamiltonianCycle => {
            if n < 3 {
                return Ok(out);
            }
            if (1u128 << m) <= budget as u128 {
                for mask in 0u64..(1u64 << m) {
                    let s = mask_to_set(&edge_ids, mask);
                    let cand = SolutionTuple::single_edge_set(s);
                    if is_solution(g, spec, &cand) {
                        out.insert(cand);
                    }
                }
            } else {
                // Edge-subset space too large (dense graphs): exhaust cyclic
                // vertex orders instead, still a direct enumeration.
                let perms: u128 = (2..n as u128).product();
                check(perms)?;
                let mut rest: Vec<VertexId> = verts[1..].to_vec();
                let first = verts[0];
                permute_all(&mut rest, 0, &mut |order| {
                    let mut cycle = vec![first];
                    cycle.extend_from_slice(order);
                    if let Some(s) = cycle_edge_set(g, &cycle) {
                        let cand = SolutionTuple::single_edge_set(s);
                        if is_solution(g, spec, &cand) {
                            out.insert(cand);
                        }
                    }
                });
            }
        }
        ProblemKind::DColoring => {
            let d = spec.d as u64;
            let needed = (d as u128).pow(n as u32);
            check(needed)?;
            let mut assignment = vec![0u32; n];
            loop {
                let mut parts: Vec<BTreeSet<VertexId>> =
                    vec![BTreeSet::new(); spec.d as usize];
                for (i, &v) in verts.iter().enumerate() {
                    parts[assignment[i] as usize].insert(v);
                }
                let cand = SolutionTuple { vertex_sets: parts, edge_sets: vec![] };
                if is_solution(g, spec, &cand) {
                    out.insert(cand);
                }
                // Odometer increment.
                let mut i = 0;
                loop {
                    if i == n {
                        return Ok(out);
                    }
                    assignment[i] += 1;
                    if (assignment[i] as u64) < d {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
            }
        }
    }
    Ok(out)
}

fn mask_to_set(ids: &[u32], mask: u64) -> BTreeSet<u32> {
    ids.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

fn cycle_edge_set(g: &Graph, cycle: &[VertexId]) -> Option<BTreeSet<EdgeId>> {
    let mut edge_of: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    for (e, (u, v)) in g.edges() {
        edge_of.insert((u, v), e);
    }
    let mut out = BTreeSet::new();
    for i in 0..cycle.len() {
        let u = cycle[i];
        let v = cycle[(i + 1) % cycle.len()];
        let key = (u.min(v), u.max(v));
        out.insert(*edge_of.get(&key)?);
    }
    Some(out)
}

fn permute_all(items: &mut Vec<VertexId>, k: usize, f: &mut impl FnMut(&[VertexId])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap()
    }

    fn set(vs: &[u32]) -> BTreeSet<u32> {
        vs.iter().copied().collect()
    }

    #[test]
    fn parse_p3() {
        let g = p3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.endpoints(1), Some((1, 2)));
        assert_eq!(g.endpoints(2), Some((2, 3)));
    }

    #[test]
    fn parse_isolated_vertex() {
        let g = Graph::parse("p 1 0\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = Graph::parse("p 2 1\ne 1 1\n").unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { line: 2, v: 1 });
    }

    #[test]
    fn parse_rejects_duplicate_and_range() {
        assert!(matches!(
            Graph::parse("p 3 2\ne 1 2\ne 2 1\n").unwrap_err(),
            GraphError::DuplicateEdge { line: 3, .. }
        ));
        assert!(matches!(
            Graph::parse("p 3 1\ne 1 9\n").unwrap_err(),
            GraphError::EndpointOutOfRange { line: 2, v: 9, n: 3 }
        ));
    }

    #[test]
    fn serialize_round_trip() {
        let g = p3();
        let again = Graph::parse(&g.to_edge_list()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn oracle_is_p3() {
        // All independent sets of size >= 1 in the path 1-2-3.
        let sols = brute_force_solutions(&p3(), &ProblemSpec::independent_set(1), 1 << 20)
            .unwrap();
        let expect: BTreeSet<SolutionTuple> = [set(&[1]), set(&[2]), set(&[3]), set(&[1, 3])]
            .into_iter()
            .map(SolutionTuple::single_vertex_set)
            .collect();
        assert_eq!(sols, expect);
    }

    #[test]
    fn oracle_two_coloring_triangle_empty() {
        let k3 = Graph::parse("p 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        let sols =
            brute_force_solutions(&k3, &ProblemSpec::coloring(2), 1 << 20).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn oracle_empty_graph_is() {
        let g = Graph::parse("p 0 0\n").unwrap();
        let sols = brute_force_solutions(&g, &ProblemSpec::independent_set(0), 1 << 20)
            .unwrap();
        let expect: BTreeSet<SolutionTuple> =
            [SolutionTuple::single_vertex_set(BTreeSet::new())].into_iter().collect();
        assert_eq!(sols, expect);
    }

    #[test]
    fn oracle_budget() {
        let g = p3();
        let err = brute_force_solutions(&g, &ProblemSpec::independent_set(0), 4).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn oracle_cut_k2() {
        let k2 = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let sols = brute_force_solutions(&k2, &ProblemSpec::cut(1), 1 << 20).unwrap();
        let expect: BTreeSet<SolutionTuple> =
            [SolutionTuple::single_edge_set(set(&[1]))].into_iter().collect();
        assert_eq!(sols, expect);
    }

    #[test]
    fn oracle_hc_c5_unique() {
        let c5 = Graph::parse("p 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n").unwrap();
        let sols =
            brute_force_solutions(&c5, &ProblemSpec::hamiltonian_cycle(), 1 << 20).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(
            sols.first().unwrap(),
            &SolutionTuple::single_edge_set(set(&[1, 2, 3, 4, 5]))
        );
    }

    #[test]
    fn oracle_hc_small_graphs_empty() {
        for text in ["p 1 0\n", "p 2 1\ne 1 2\n"] {
            let g = Graph::parse(text).unwrap();
            let sols =
                brute_force_solutions(&g, &ProblemSpec::hamiltonian_cycle(), 1 << 20).unwrap();
            assert!(sols.is_empty());
        }
    }

    #[test]
    fn oracle_closed_under_predicate() {
        // Everything returned satisfies the predicate; nothing omitted.
        let g = p3();
        for spec in [
            ProblemSpec::independent_set(1),
            ProblemSpec::dominating_set(2),
            ProblemSpec::cut(1),
            ProblemSpec::coloring(2),
        ] {
            let sols = brute_force_solutions(&g, &spec, 1 << 20).unwrap();
            for s in &sols {
                assert!(is_solution(&g, &spec, s), "{spec}: {s} fails predicate");
            }
        }
    }

    #[test]
    fn is_upward_closed_above_threshold() {
        let g = p3();
        let spec = ProblemSpec::independent_set(1);
        let sols = brute_force_solutions(&g, &spec, 1 << 20).unwrap();
        for s in &sols {
            let x = &s.vertex_sets[0];
            for extra in g.vertices() {
                let mut y = x.clone();
                y.insert(extra);
                if is_independent(&g, &y) {
                    assert!(sols.contains(&SolutionTuple::single_vertex_set(y)));
                }
            }
        }
    }

    #[test]
    fn hc_permutation_route_matches_subset_route() {
        // K5 is small enough for both enumeration strategies.
        let mut lines = vec!["p 5 10".to_string()];
        for u in 1..=5u32 {
            for v in (u + 1)..=5 {
                lines.push(format!("e {u} {v}"));
            }
        }
        let g = Graph::parse(&(lines.join("\n") + "\n")).unwrap();
        let spec = ProblemSpec::hamiltonian_cycle();
        let by_subsets = brute_force_solutions(&g, &spec, 1 << 20).unwrap();
        let by_perms = brute_force_solutions(&g, &spec, 30).unwrap();
        assert_eq!(by_subsets, by_perms);
        assert_eq!(by_subsets.len(), 12); // (5-1)!/2
    }
}
