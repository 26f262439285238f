//! Dominating set core: witnesses (S1, S2, c) with S1 the chosen bag
//! vertices, S2 the dominated bag vertices (S1 is a subset of S2), and c the
//! exact number of chosen vertices introduced so far.
//!
//! The intro rule increments c on the branch that selects the vertex;
//! `uncorrected` keeps the swapped counter placement for mutation checks (it
//! contradicts the join correction term c+c'-|S1| and admits witness trees
//! projecting outside the solution set). Forgetting a vertex that is not yet
//! dominated rejects.

use std::collections::BTreeSet;

use super::DpCore;
use crate::graph::VertexId;
use crate::witness::{Dec, Enc, Witness};

pub struct DominatingSetCore {
    pub ell: u32,
    pub uncorrected: bool,
}

fn encode(s1: &BTreeSet<u32>, s2: &BTreeSet<u32>, c: u32) -> Witness {
    Enc::new().set(s1).set(s2).u32(c).finish()
}

fn decode(w: &Witness) -> (BTreeSet<u32>, BTreeSet<u32>, u32) {
    let mut d = Dec::new(w);
    let s1 = d.set();
    let s2 = d.set();
    let c = d.u32();
    debug_assert!(d.done());
    (s1, s2, c)
}

impl DpCore for DominatingSetCore {
    fn name(&self) -> String {
        if self.uncorrected {
            format!("dominating-set-uncorrected(l={})", self.ell)
        } else {
            format!("dominating-set(l={})", self.ell)
        }
    }

    fn arity(&self) -> (usize, usize) {
        (1, 0)
    }

    fn leaf(&self) -> Vec<Witness> {
        vec![encode(&BTreeSet::new(), &BTreeSet::new(), 0)]
    }

    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (s1, s2, c) = decode(w);
        let mut t1 = s1.clone();
        let mut t2 = s2.clone();
        t1.insert(v);
        t2.insert(v);
        if self.uncorrected {
            vec![encode(&t1, &t2, c), encode(&s1, &s2, c + 1)]
        } else {
            vec![encode(&t1, &t2, c + 1), encode(&s1, &s2, c)]
        }
    }

    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness> {
        let (s1, mut s2, c) = decode(w);
        let in1 = s1.contains(&v1);
        let in2 = s1.contains(&v2);
        if in1 == in2 {
            vec![w.clone()]
        } else if !in1 {
            s2.insert(v1);
            vec![encode(&s1, &s2, c)]
        } else {
            s2.insert(v2);
            vec![encode(&s1, &s2, c)]
        }
    }

    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let (mut s1, mut s2, c) = decode(w);
        if !s2.contains(&v) {
            // Leaving the bag undominated can never be repaired.
            return vec![];
        }
        s1.remove(&v);
        s2.remove(&v);
        vec![encode(&s1, &s2, c)]
    }

    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness> {
        let (a1, a2, c1) = decode(w1);
        let (b1, b2, c2) = decode(w2);
        if a1 != b1 {
            return vec![];
        }
        let union: BTreeSet<u32> = a2.union(&b2).copied().collect();
        // With the uncorrected counter placement c1 + c2 can undershoot the
        // overlap correction; saturating keeps the broken variant runnable
        // for the mutation demonstration.
        let c = (c1 + c2).saturating_sub(a1.len() as u32);
        vec![encode(&a1, &union, c)]
    }

    fn is_final(&self, w: &Witness) -> bool {
        decode(w).2 <= self.ell
    }

    fn member(&self, component: usize, element: u32, w: &Witness) -> bool {
        debug_assert_eq!(component, 0);
        decode(w).0.contains(&element)
    }

    fn describe(&self, w: &Witness) -> String {
        let (s1, s2, c) = decode(w);
        let f = |s: &BTreeSet<u32>| {
            let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        format!("({},{},{})", f(&s1), f(&s2), c)
    }

    fn table_ceiling(&self, k: usize, n: usize, _m: usize) -> Option<u128> {
        3u128
            .checked_pow((k + 1) as u32)?
            .checked_mul(n as u128 + 1)
    }
}
