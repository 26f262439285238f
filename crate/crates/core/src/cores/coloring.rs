//! d-coloring core: witnesses are ordered partitions (S_1, ..., S_d) of the
//! bag. Parts may be empty; the solution space is ordered partitions of the
//! vertex set into d independent sets.

use std::collections::BTreeSet;

use super::DpCore;
use crate::graph::VertexId;
use crate::witness::{Dec, Enc, Witness};

pub struct ColoringCore {
    pub d: u32,
}

fn encode(parts: &[BTreeSet<u32>]) -> Witness {
    let mut e = Enc::new();
    for p in parts {
        e = e.set(p);
    }
    e.finish()
}

fn decode(w: &Witness, d: u32) -> Vec<BTreeSet<u32>> {
    let mut dec = Dec::new(w);
    let parts: Vec<BTreeSet<u32>> = (0..d).map(|_| dec.set()).collect();
    debug_assert!(dec.done());
    parts
}

impl DpCore for ColoringCore {
    fn name(&self) -> String {
        format!("coloring(d={})", self.d)
    }

    fn arity(&self) -> (usize, usize) {
        (self.d as usize, 0)
    }

    fn leaf(&self) -> Vec<Witness> {
        vec![encode(&vec![BTreeSet::new(); self.d as usize])]
    }

    fn intro_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let parts = decode(w, self.d);
        (0..self.d as usize)
            .map(|i| {
                let mut out = parts.clone();
                out[i].insert(v);
                encode(&out)
            })
            .collect()
    }

    fn intro_edge(&self, v1: VertexId, v2: VertexId, w: &Witness) -> Vec<Witness> {
        let parts = decode(w, self.d);
        if parts.iter().any(|p| p.contains(&v1) && p.contains(&v2)) {
            vec![]
        } else {
            vec![w.clone()]
        }
    }

    fn forget_vertex(&self, v: VertexId, w: &Witness) -> Vec<Witness> {
        let mut parts = decode(w, self.d);
        for p in &mut parts {
            p.remove(&v);
        }
        vec![encode(&parts)]
    }

    fn join(&self, w1: &Witness, w2: &Witness) -> Vec<Witness> {
        if w1 == w2 {
            vec![w1.clone()]
        } else {
            vec![]
        }
    }

    fn is_final(&self, _w: &Witness) -> bool {
        true
    }

    fn member(&self, component: usize, element: u32, w: &Witness) -> bool {
        decode(w, self.d)[component].contains(&element)
    }

    fn describe(&self, w: &Witness) -> String {
        let parts = decode(w, self.d);
        let rendered: Vec<String> = parts
            .iter()
            .map(|p| {
                let items: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        format!("({})", rendered.join(","))
    }

    fn table_ceiling(&self, k: usize, _n: usize, _m: usize) -> Option<u128> {
        (self.d as u128).checked_pow((k + 1) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(parts: &[&[u32]]) -> Witness {
        let sets: Vec<BTreeSet<u32>> =
            parts.iter().map(|p| p.iter().copied().collect()).collect();
        encode(&sets)
    }

    #[test]
    fn intro_offers_each_color() {
        let core = ColoringCore { d: 2 };
        let out = core.intro_vertex(1, &w(&[&[], &[]]));
        assert_eq!(out.len(), 2);
        assert!(out.contains(&w(&[&[1], &[]])));
        assert!(out.contains(&w(&[&[], &[1]])));
    }

    #[test]
    fn edge_rejects_monochrome_endpoints() {
        let core = ColoringCore { d: 2 };
        assert!(core.intro_edge(1, 2, &w(&[&[1, 2], &[]])).is_empty());
        assert_eq!(
            core.intro_edge(1, 2, &w(&[&[1], &[2]])),
            vec![w(&[&[1], &[2]])]
        );
    }

    #[test]
    fn join_requires_identical_partitions() {
        let core = ColoringCore { d: 2 };
        assert_eq!(core.join(&w(&[&[1], &[]]), &w(&[&[1], &[]])).len(), 1);
        assert!(core.join(&w(&[&[1], &[]]), &w(&[&[], &[1]])).is_empty());
    }
}
