//! Cut core: witnesses (R, S, c) where S is one side of the bipartition
//! restricted to the bag, R records the endpoint pairs of crossing edges
//! still inside the bag, and c counts crossing edges seen so far. The edge
//! membership function resolves an edge id to its endpoint pair, so the core
//! carries the incidence map of its graph.
//!
//! Joins sum counts without double-counting: each edge is introduced in
//! exactly one subtree (xi is injective), which the join asserts via the
//! disjointness of the recorded pair sets.

use std::collections::{BTreeMap, BTreeSet};

use super::DpCore;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::witness::{Dec, Enc, Witness};

pub struct CutCore {
    pub ell: u32,
    endpoints: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl CutCore {
    pub fn new(ell: u32, g: &Graph) -> Self {
        CutCore { ell, endpoints: g.edges().collect() }
    }
}

fn encode(r: &BTreeSet<(u32, u32)>, s: &BTreeSet<u32>, c: u32) -> Witness {
    Enc::new().pairs(r).set(s).u32(c).finish()
}

fn decode(w: &Witness) -> (BTreeSet<(u32, u32)>, BTreeSet<u32>, u32) {
    let mut d = Dec::new(w);
    let r = d.pairs();
    let s = d.set();
    let c = d.u32();
    debug_assert!(d.done());
    (r, s, c)
}

impl DpCore for CutCore {
    fn name(&self) -> String {
        format!("cut(l={})", self.ell)
    }

    fn arity(&self) -> (usize, usize) {
        (0, 1)
    }

    fn leaf(&self) -> Vec<Witness> {
        vec![encode(&BTreeSet::new(), &BTreeSet::new(), 0)]
    }

    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (r, s, c) = decode(w);
        let mut with_v = s.clone();
        with_v.insert(v);
        vec![encode(&r, &s, c), encode(&r, &with_v, c)]
    }

    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness> {
        let (mut r, s, c) = decode(w);
        if s.contains(&v1) != s.contains(&v2) {
            r.insert((v1.min(v2), v1.max(v2)));
            vec![encode(&r, &s, c + 1)]
        } else {
            vec![w.clone()]
        }
    }

    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (r, mut s, c) = decode(w);
        let kept: BTreeSet<(u32, u32)> =
            r.into_iter().filter(|&(a, b)| a != v && b != v).collect();
        s.remove(&v);
        vec![encode(&kept, &s, c)]
    }

    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness> {
        let (r1, s1, c1) = decode(w1);
        let (r2, s2, c2) = decode(w2);
        if s1 != s2 {
            return vec![];
        }
        debug_assert!(
            r1.is_disjoint(&r2),
            "an edge pair recorded in both join branches would be introduced twice"
        );
        let r: BTreeSet<(u32, u32)> = r1.union(&r2).copied().collect();
        vec![encode(&r, &s1, c1 + c2)]
    }

    fn is_final(&self, w: &Witness) -> bool {
        decode(w).2 >= self.ell
    }

    fn member(&self, component: usize, element: u32, w: &Witness) -> bool {
        debug_assert_eq!(component, 0);
        let Some(&(a, b)) = self.endpoints.get(&element) else {
            return false;
        };
        decode(w).0.contains(&(a, b))
    }

    fn describe(&self, w: &Witness) -> String {
        let (r, s, c) = decode(w);
        let pairs: Vec<String> = r.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        let side: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        format!("({{{}}},{{{}}},{})", pairs.join(","), side.join(","), c)
    }

    fn table_ceiling(&self, k: usize, _n: usize, m: usize) -> Option<u128> {
        let b = (k + 1) as u32;
        let side = 1u128.checked_shl(b)?;
        let pairs = 1u128.checked_shl(b * (b.checked_sub(1)?) / 2)?;
        side.checked_mul(m as u128 + 1)?.checked_mul(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k2() -> Graph {
        Graph::parse("p 2 1\ne 1 2\n").unwrap()
    }

    fn w(r: &[(u32, u32)], s: &[u32], c: u32) -> Witness {
        encode(&r.iter().copied().collect(), &s.iter().copied().collect(), c)
    }

    #[test]
    fn crossing_edge_is_recorded() {
        let core = CutCore::new(0, &k2());
        assert_eq!(
            core.intro_edge(1, 2, &w(&[], &[2], 0)),
            vec![w(&[(1, 2)], &[2], 1)]
        );
        assert_eq!(core.intro_edge(1, 2, &w(&[], &[], 0)), vec![w(&[], &[], 0)]);
        assert_eq!(
            core.intro_edge(1, 2, &w(&[], &[1, 2], 0)),
            vec![w(&[], &[1, 2], 0)]
        );
    }

    #[test]
    fn forget_drops_pairs_of_vertex() {
        let core = CutCore::new(0, &k2());
        assert_eq!(
            core.forget_vertex(1, &w(&[(1, 2)], &[2], 1)),
            vec![w(&[], &[2], 1)]
        );
    }

    #[test]
    fn membership_resolves_edge_endpoints() {
        let core = CutCore::new(0, &k2());
        assert!(core.member(0, 1, &w(&[(1, 2)], &[2], 1)));
        assert!(!core.member(0, 1, &w(&[], &[2], 0)));
    }

    #[test]
    fn join_requires_equal_sides_and_sums() {
        let core = CutCore::new(0, &k2());
        assert_eq!(
            core.join(&w(&[(1, 2)], &[1], 1), &w(&[], &[1], 2)),
            vec![w(&[(1, 2)], &[1], 3)]
        );
        assert!(core.join(&w(&[], &[1], 0), &w(&[], &[2], 0)).is_empty());
    }
}
