//! Hamiltonian cycle cores.
//!
//! Witnesses track the bag partition by degree in the picked edge set:
//! S0 = degree 0, S1 = endpoint matching of the partial paths (stored as
//! ordered pairs), S2 = degree 2. The corrected core extends this with a
//! `closed` bit (the single cycle has been completed) and a `took` bit (the
//! edge introduced at this node was picked), which makes the edge membership
//! function well defined at intro-edge nodes.
//!
//! Corrections over the classical recurrences as commonly tabulated, each
//! demonstrably necessary against the brute-force oracle:
//!   - every intro-edge also yields the skip successor (the edge stays out);
//!   - picking an edge whose endpoints are the two ends of one path closes
//!     the cycle, allowed exactly once via the `closed` bit;
//!   - a join whose merged matching forms exactly one cycle also closes it
//!     (decompositions that split a cycle's edges across both join branches
//!     can only complete it there);
//!   - vertices reaching degree 2 move into S2;
//!   - final requires `closed` and an empty bag partition.
//!
//! `UncorrectedHamiltonianCycleCore` keeps the uncorrected recurrences
//! verbatim: no skip branch, no closure, the final predicate identically 1.
//! It fails the solution-preservation check and is kept for mutation
//! demonstrations.

use std::collections::{BTreeMap, BTreeSet};

use super::{matching_configs, DpCore};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::witness::{Dec, Enc, Witness};

type Pairs = BTreeSet<(u32, u32)>;

fn pair(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct HcState {
    s0: BTreeSet<u32>,
    s1: Pairs,
    s2: BTreeSet<u32>,
    closed: bool,
    took: bool,
}

impl HcState {
    fn encode(&self) -> Witness {
        Enc::new()
            .set(&self.s0)
            .pairs(&self.s1)
            .set(&self.s2)
            .u8(self.closed as u8)
            .u8(self.took as u8)
            .finish()
    }

    fn decode(w: &Witness) -> Self {
        let mut d = Dec::new(w);
        let s0 = d.set();
        let s1 = d.pairs();
        let s2 = d.set();
        let closed = d.u8() == 1;
        let took = d.u8() == 1;
        debug_assert!(d.done());
        HcState { s0, s1, s2, closed, took }
    }

    /// 0 = untouched, 1 = path endpoint, 2 = saturated; None if not tracked.
    fn degree(&self, v: u32) -> Option<u8> {
        if self.s0.contains(&v) {
            Some(0)
        } else if self.s1.iter().any(|&(a, b)| a == v || b == v) {
            Some(1)
        } else if self.s2.contains(&v) {
            Some(2)
        } else {
            None
        }
    }

    fn pair_of(&self, v: u32) -> Option<(u32, u32)> {
        self.s1.iter().copied().find(|&(a, b)| a == v || b == v)
    }
}

/// Decomposes the multigraph union of two partial matchings into maximal
/// paths and cycles: returns (endpoint pairs of the paths, cycle count).
fn merge_matchings(l1: &Pairs, l2: &Pairs) -> (Pairs, usize) {
    let edges: Vec<(u32, u32)> = l1.iter().chain(l2.iter()).copied().collect();
    let mut adj: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj.entry(a).or_default().push(i);
        adj.entry(b).or_default().push(i);
    }
    let mut used = vec![false; edges.len()];
    let mut paths: Pairs = BTreeSet::new();
    // Walk each maximal path from a degree-1 endpoint.
    let deg1: Vec<u32> = adj.iter().filter(|(_, es)| es.len() == 1).map(|(&v, _)| v).collect();
    for &start in &deg1 {
        let first = adj[&start][0];
        if used[first] {
            continue;
        }
        let mut cur = start;
        loop {
            let next_edge = adj[&cur].iter().copied().find(|&i| !used[i]);
            match next_edge {
                None => break,
                Some(i) => {
                    used[i] = true;
                    let (a, b) = edges[i];
                    cur = if a == cur { b } else { a };
                }
            }
        }
        paths.insert(pair(start, cur));
    }
    // Remaining unused edges lie on cycles.
    let mut cycles = 0;
    for i in 0..edges.len() {
        if used[i] {
            continue;
        }
        cycles += 1;
        used[i] = true;
        let (start, mut cur) = edges[i];
        while cur != start {
            let j = adj[&cur]
                .iter()
                .copied()
                .find(|&j| !used[j])
                .expect("cycle walk stays on unused edges");
            used[j] = true;
            let (a, b) = edges[j];
            cur = if a == cur { b } else { a };
        }
    }
    (paths, cycles)
}

pub struct HamiltonianCycleCore;

impl DpCore for HamiltonianCycleCore {
    fn name(&self) -> String {
        "hamiltonian-cycle".to_string()
    }

    fn arity(&self) -> (usize, usize) {
        (0, 1)
    }

    fn leaf(&self) -> Vec<Witness> {
        vec![HcState {
            s0: BTreeSet::new(),
            s1: BTreeSet::new(),
            s2: BTreeSet::new(),
            closed: false,
            took: false,
        }
        .encode()]
    }

    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let mut st = HcState::decode(w);
        st.s0.insert(v);
        st.took = false;
        vec![st.encode()]
    }

    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness> {
        let base = HcState::decode(w);
        let mut out = Vec::new();
        let mut skip = base.clone();
        skip.took = false;
        out.push(skip.encode());
        if base.closed {
            return out;
        }
        let (d1, d2) = (base.degree(v1), base.degree(v2));
        let take = match (d1, d2) {
            (Some(0), Some(0)) => {
                let mut st = base.clone();
                st.s0.remove(&v1);
                st.s0.remove(&v2);
                st.s1.insert(pair(v1, v2));
                Some(st)
            }
            (Some(0), Some(1)) | (Some(1), Some(0)) => {
                let (free, end) = if d1 == Some(0) { (v1, v2) } else { (v2, v1) };
                let p = base.pair_of(end).unwrap();
                let other = if p.0 == end { p.1 } else { p.0 };
                let mut st = base.clone();
                st.s0.remove(&free);
                st.s1.remove(&p);
                st.s1.insert(pair(free, other));
                st.s2.insert(end);
                Some(st)
            }
            (Some(1), Some(1)) => {
                let p1 = base.pair_of(v1).unwrap();
                let p2 = base.pair_of(v2).unwrap();
                let mut st = base.clone();
                if p1 == p2 {
                    // Both ends of one path: the cycle closes here.
                    st.s1.remove(&p1);
                    st.s2.insert(v1);
                    st.s2.insert(v2);
                    st.closed = true;
                } else {
                    let o1 = if p1.0 == v1 { p1.1 } else { p1.0 };
                    let o2 = if p2.0 == v2 { p2.1 } else { p2.0 };
                    st.s1.remove(&p1);
                    st.s1.remove(&p2);
                    st.s1.insert(pair(o1, o2));
                    st.s2.insert(v1);
                    st.s2.insert(v2);
                }
                Some(st)
            }
            _ => None,
        };
        if let Some(mut st) = take {
            st.took = true;
            out.push(st.encode());
        }
        out.sort();
        out.dedup();
        out
    }

    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let mut st = HcState::decode(w);
        if !st.s2.remove(&v) {
            // Forgetting a vertex of degree < 2 can never complete a cycle.
            return vec![];
        }
        st.took = false;
        vec![st.encode()]
    }

    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness> {
        let a = HcState::decode(w1);
        let b = HcState::decode(w2);
        let support: BTreeSet<u32> = a
            .s0
            .iter()
            .chain(a.s2.iter())
            .copied()
            .chain(a.s1.iter().flat_map(|&(x, y)| [x, y]))
            .collect();
        let support_b: BTreeSet<u32> = b
            .s0
            .iter()
            .chain(b.s2.iter())
            .copied()
            .chain(b.s1.iter().flat_map(|&(x, y)| [x, y]))
            .collect();
        if support != support_b {
            return vec![];
        }
        for &v in &support {
            if a.degree(v).unwrap() + b.degree(v).unwrap() > 2 {
                return vec![];
            }
        }
        let (paths, cycles) = merge_matchings(&a.s1, &b.s1);
        let closed_total = a.closed as usize + b.closed as usize + cycles;
        if closed_total > 1 {
            return vec![];
        }
        let mut s0 = BTreeSet::new();
        let mut s2 = BTreeSet::new();
        for &v in &support {
            match a.degree(v).unwrap() + b.degree(v).unwrap() {
                0 => {
                    s0.insert(v);
                }
                2 => {
                    s2.insert(v);
                }
                _ => {} // path endpoints stay in the matching
            }
        }
        vec![HcState { s0, s1: paths, s2, closed: closed_total == 1, took: false }.encode()]
    }

    fn is_final(&self, w: &Witness) -> bool {
        let st = HcState::decode(w);
        st.closed && st.s0.is_empty() && st.s1.is_empty() && st.s2.is_empty()
    }

    fn member(&self, component: usize, _element: u32, w: &Witness) -> bool {
        debug_assert_eq!(component, 0);
        HcState::decode(w).took
    }

    fn describe(&self, w: &Witness) -> String {
        let st = HcState::decode(w);
        let set = |s: &BTreeSet<u32>| {
            let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        let pairs: Vec<String> = st.s1.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!(
            "({},{{{}}},{},closed={},took={})",
            set(&st.s0),
            pairs.join(","),
            set(&st.s2),
            st.closed as u8,
            st.took as u8
        )
    }

    fn table_ceiling(&self, k: usize, _n: usize, _m: usize) -> Option<u128> {
        matching_configs(k + 1)?.checked_mul(4)
    }
}

/// The uncorrected recurrences, verbatim. Not solution-preserving: there is
/// no branch that skips a pickable edge, no closure rule, and the final
/// predicate accepts every root witness.
pub struct UncorrectedHamiltonianCycleCore {
    endpoints: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl UncorrectedHamiltonianCycleCore {
    pub fn new(g: &Graph) -> Self {
        UncorrectedHamiltonianCycleCore { endpoints: g.edges().collect() }
    }
}

fn lit_encode(s0: &BTreeSet<u32>, s1: &Pairs, s2: &BTreeSet<u32>) -> Witness {
    Enc::new().set(s0).pairs(s1).set(s2).finish()
}

fn lit_decode(w: &Witness) -> (BTreeSet<u32>, Pairs, BTreeSet<u32>) {
    let mut d = Dec::new(w);
    let s0 = d.set();
    let s1 = d.pairs();
    let s2 = d.set();
    debug_assert!(d.done());
    (s0, s1, s2)
}

fn lit_degree(s0: &BTreeSet<u32>, s1: &Pairs, s2: &BTreeSet<u32>, v: u32) -> u8 {
    if s2.contains(&v) {
        2
    } else if s1.iter().any(|&(a, b)| a == v || b == v) {
        1
    } else if s0.contains(&v) {
        0
    } else {
        0
    }
}

impl DpCore for UncorrectedHamiltonianCycleCore {
    fn name(&self) -> String {
        "hamiltonian-cycle-uncorrected".to_string()
    }

    fn arity(&self) -> (usize, usize) {
        (0, 1)
    }

    fn leaf(&self) -> Vec<Witness> {
        vec![lit_encode(&BTreeSet::new(), &BTreeSet::new(), &BTreeSet::new())]
    }

    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (mut s0, s1, s2) = lit_decode(w);
        s0.insert(v);
        vec![lit_encode(&s0, &s1, &s2)]
    }

    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness> {
        let (mut s0, mut s1, s2) = lit_decode(w);
        let find = |s1: &Pairs, v: u32| s1.iter().copied().find(|&(a, b)| a == v || b == v);
        if s0.contains(&v1) && s0.contains(&v2) {
            s0.remove(&v1);
            s0.remove(&v2);
            s1.insert(pair(v1, v2));
            return vec![lit_encode(&s0, &s1, &s2)];
        }
        for (free, end) in [(v1, v2), (v2, v1)] {
            if s0.contains(&free) {
                if let Some(p) = find(&s1, end) {
                    let other = if p.0 == end { p.1 } else { p.0 };
                    s0.remove(&free);
                    s1.remove(&p);
                    s1.insert(pair(free, other));
                    return vec![lit_encode(&s0, &s1, &s2)];
                }
            }
        }
        if let (Some(p1), Some(p2)) = (find(&s1, v1), find(&s1, v2)) {
            if p1 != p2 {
                // Verbatim uncorrected rule: replace v2's pair with
                // (v1, other end); v1's own pair is left in place.
                let o2 = if p2.0 == v2 { p2.1 } else { p2.0 };
                s1.remove(&p2);
                s1.insert(pair(v1, o2));
                return vec![lit_encode(&s0, &s1, &s2)];
            }
        }
        vec![w.clone()]
    }

    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (s0, s1, mut s2) = lit_decode(w);
        if !s2.remove(&v) {
            return vec![];
        }
        vec![lit_encode(&s0, &s1, &s2)]
    }

    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness> {
        let (a0, a1, a2) = lit_decode(w1);
        let (b0, b1, b2) = lit_decode(w2);
        let mut support: BTreeSet<u32> = a0.iter().chain(a2.iter()).copied().collect();
        support.extend(a1.iter().flat_map(|&(x, y)| [x, y]));
        support.extend(b0.iter().chain(b2.iter()).copied());
        support.extend(b1.iter().flat_map(|&(x, y)| [x, y]));
        for &v in &support {
            if lit_degree(&a0, &a1, &a2, v) + lit_degree(&b0, &b1, &b2, v) > 2 {
                return vec![];
            }
        }
        let (paths, cycles) = merge_matchings(&a1, &b1);
        if cycles > 0 {
            return vec![]; // unconditional acyclicity requirement
        }
        let mut r0 = BTreeSet::new();
        let mut r2 = BTreeSet::new();
        for &v in &support {
            match lit_degree(&a0, &a1, &a2, v) + lit_degree(&b0, &b1, &b2, v) {
                0 => {
                    r0.insert(v);
                }
                2 => {
                    r2.insert(v);
                }
                _ => {}
            }
        }
        vec![lit_encode(&r0, &paths, &r2)]
    }

    fn is_final(&self, _w: &Witness) -> bool {
        true // the uncorrected final predicate is identically 1
    }

    fn member(&self, component: usize, element: u32, w: &Witness) -> bool {
        debug_assert_eq!(component, 0);
        let Some(&(a, b)) = self.endpoints.get(&element) else {
            return false;
        };
        lit_decode(w).1.contains(&(a, b))
    }

    fn describe(&self, w: &Witness) -> String {
        let (s0, s1, s2) = lit_decode(w);
        let set = |s: &BTreeSet<u32>| {
            let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        let pairs: Vec<String> = s1.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!("({},{{{}}},{})", set(&s0), pairs.join(","), set(&s2))
    }

    fn table_ceiling(&self, k: usize, _n: usize, _m: usize) -> Option<u128> {
        matching_configs(k + 1)
    }
}
