//! Independent set core: witnesses are pairs (S, c) with S the chosen
//! vertices inside the bag and c the exact count of chosen vertices
//! introduced so far. Counters are never capped at the threshold; capping
//! would merge witnesses and lose retrievable solutions.

use std::collections::BTreeSet;

use super::DpCore;
use crate::graph::VertexId;
use crate::witness::{Dec, Enc, Witness};

pub struct IndependentSetCore {
    pub ell: u32,
}

fn encode(s: &BTreeSet<u32>, c: u32) -> Witness {
    Enc::new().set(s).u32(c).finish()
}

fn decode(w: &Witness) -> (BTreeSet<u32>, u32) {
    let mut d = Dec::new(w);
    let s = d.set();
    let c = d.u32();
    debug_assert!(d.done());
    (s, c)
}

impl DpCore for IndependentSetCore {
    fn name(&self) -> String {
        format!("independent-set(l={})", self.ell)
    }

    fn arity(&self) -> (usize, usize) {
        (1, 0)
    }

    fn leaf(&self) -> Vec<Witness> {
        vec![encode(&BTreeSet::new(), 0)]
    }

    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (s, c) = decode(w);
        let mut with_v = s.clone();
        with_v.insert(v);
        vec![encode(&s, c), encode(&with_v, c + 1)]
    }

    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness> {
        let (s, _) = decode(w);
        if s.contains(&v1) && s.contains(&v2) {
            vec![]
        } else {
            vec![w.clone()]
        }
    }

    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (mut s, c) = decode(w);
        s.remove(&v);
        vec![encode(&s, c)]
    }

    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness> {
        let (s1, c1) = decode(w1);
        let (s2, c2) = decode(w2);
        if s1 != s2 {
            vec![]
        } else {
            // Vertices in the shared bag selection are counted on both sides.
            vec![encode(&s1, c1 + c2 - s1.len() as u32)]
        }
    }

    fn is_final(&self, w: &Witness) -> bool {
        decode(w).1 >= self.ell
    }

    fn member(&self, component: usize, element: u32, w: &Witness) -> bool {
        debug_assert_eq!(component, 0);
        decode(w).0.contains(&element)
    }

    fn describe(&self, w: &Witness) -> String {
        let (s, c) = decode(w);
        let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        format!("({{{}}},{})", items.join(","), c)
    }

    fn table_ceiling(&self, k: usize, n: usize, _m: usize) -> Option<u128> {
        1u128
            .checked_shl((k + 1) as u32)?
            .checked_mul(n as u128 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[u32], c: u32) -> Witness {
        encode(&s.iter().copied().collect(), c)
    }

    #[test]
    fn intro_vertex_rule() {
        let core = IndependentSetCore { ell: 0 };
        let out = core.intro_vertex(3, &w(&[], 0));
        assert_eq!(out, vec![w(&[], 0), w(&[3], 1)]);
    }

    #[test]
    fn intro_edge_kills_both_endpoints() {
        let core = IndependentSetCore { ell: 0 };
        assert!(core.intro_edge(1, 2, &w(&[1, 2], 2)).is_empty());
        assert_eq!(core.intro_edge(1, 2, &w(&[1], 1)), vec![w(&[1], 1)]);
    }

    #[test]
    fn join_subtracts_shared_bag() {
        let core = IndependentSetCore { ell: 0 };
        assert_eq!(core.join(&w(&[1], 1), &w(&[1], 2)), vec![w(&[1], 2)]);
        assert!(core.join(&w(&[1], 1), &w(&[2], 1)).is_empty());
    }

    #[test]
    fn membership_is_bag_containment() {
        let core = IndependentSetCore { ell: 0 };
        assert!(core.member(0, 1, &w(&[1], 1)));
        assert!(!core.member(0, 2, &w(&[1], 1)));
    }
}
