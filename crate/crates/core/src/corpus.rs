//! The verification corpus: every connected graph up to isomorphism with at
//! most 6 vertices, paths/cycles/cliques up to 8 vertices, and seeded random
//! graphs with up to 10 vertices of heuristic width at most 3.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomposition::build_heuristic_td;
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub name: String,
    pub graph: Graph,
}

fn graph_from_mask(n: u32, mask: u64) -> Graph {
    let mut edges = BTreeMap::new();
    let mut id = 1u32;
    let mut bit = 0;
    for u in 1..=n {
        for v in (u + 1)..=n {
            if mask >> bit & 1 == 1 {
                edges.insert(id, (u, v));
                id += 1;
            }
            bit += 1;
        }
    }
    Graph::new((1..=n).collect(), edges).expect("mask graphs are simple")
}

fn mask_connected(n: usize, mask: u64) -> bool {
    if n == 0 {
        return true;
    }
    let pos = |u: usize, v: usize| -> usize {
        // bit index of pair (u < v) in the row-major upper triangle
        let mut idx = 0;
        for a in 0..n {
            for b in (a + 1)..n {
                if a == u && b == v {
                    return idx;
                }
                idx += 1;
            }
        }
        unreachable!()
    };
    let mut seen = 1u64; // vertex 0
    let mut frontier = vec![0usize];
    while let Some(u) = frontier.pop() {
        for v in 0..n {
            if v != u && seen >> v & 1 == 0 {
                let (a, b) = (u.min(v), u.max(v));
                if mask >> pos(a, b) & 1 == 1 {
                    seen |= 1 << v;
                    frontier.push(v);
                }
            }
        }
    }
    seen.count_ones() as usize == n
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in out {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, p.len());
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// All connected graphs on exactly n labeled vertices, one canonical
/// representative per isomorphism class (minimum edge mask over all vertex
/// permutations).
pub fn connected_graphs_exactly(n: usize) -> Vec<Graph> {
    if n == 0 {
        return vec![];
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    let bits = pairs.len();
    let pos: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    // Precompute, per permutation, where each bit moves.
    let perms = permutations(n);
    let perm_maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| {
            pairs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
                    pos[&(x, y)]
                })
                .collect()
        })
        .collect();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << bits) {
        if !mask_connected(n, mask) {
            continue;
        }
        let mut canon = u64::MAX;
        for map in &perm_maps {
            let mut m = 0u64;
            for (i, &j) in map.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    m |= 1 << j;
                }
            }
            canon = canon.min(m);
        }
        if seen.insert(canon) && canon == mask {
            out.push(graph_from_mask(n as u32, mask));
        }
    }
    out
}

pub fn path(n: u32) -> Graph {
    let edges: BTreeMap<u32, (u32, u32)> =
        (1..n).map(|i| (i, (i, i + 1))).collect();
    Graph::new((1..=n).collect(), edges).unwrap()
}

pub fn cycle(n: u32) -> Graph {
    assert!(n >= 3);
    let mut edges: BTreeMap<u32, (u32, u32)> =
        (1..n).map(|i| (i, (i, i + 1))).collect();
    edges.insert(n, (1, n));
    Graph::new((1..=n).collect(), edges).unwrap()
}

pub fn clique(n: u32) -> Graph {
    let mut edges = BTreeMap::new();
    let mut id = 1;
    for u in 1..=n {
        for v in (u + 1)..=n {
            edges.insert(id, (u, v));
            id += 1;
        }
    }
    Graph::new((1..=n).collect(), edges).unwrap()
}

/// Seeded random graphs with n <= 10 whose min-fill decomposition has width
/// at most `max_width`.
pub fn random_low_width_graphs(count: usize, max_width: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n: u32 = rng.random_range(4..=10);
        let p: f64 = rng.random_range(0.18..0.40);
        let mut edges = BTreeMap::new();
        let mut id = 1u32;
        for u in 1..=n {
            for v in (u + 1)..=n {
                if rng.random_bool(p) {
                    edges.insert(id, (u, v));
                    id += 1;
                }
            }
        }
        let g = Graph::new((1..=n).collect(), edges).unwrap();
        if build_heuristic_td(&g).width() <= max_width {
            out.push(g);
        }
    }
    out
}

/// The full acceptance corpus.
pub fn full_corpus(seed: u64) -> Vec<CorpusInstance> {
    let mut out = Vec::new();
    for n in 1..=6 {
        for (i, g) in connected_graphs_exactly(n).into_iter().enumerate() {
            out.push(CorpusInstance { name: format!("conn{n}-{i:03}"), graph: g });
        }
    }
    for n in 2..=8u32 {
        out.push(CorpusInstance { name: format!("P{n}"), graph: path(n) });
    }
    for n in 3..=8u32 {
        out.push(CorpusInstance { name: format!("C{n}"), graph: cycle(n) });
    }
    for n in 1..=8u32 {
        out.push(CorpusInstance { name: format!("K{n}"), graph: clique(n) });
    }
    for (i, g) in random_low_width_graphs(25, 3, seed).into_iter().enumerate() {
        out.push(CorpusInstance { name: format!("rand-{i:02}"), graph: g });
    }
    out
}
