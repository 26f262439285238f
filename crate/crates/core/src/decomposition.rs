//! Tree decompositions: raw (PACE-style) decompositions, the min-fill
//! heuristic, conversion to nice edge-introducing form, validation, and the
//! designated-node index (`nu` for vertices, `eps` for edges).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};

pub type NodeId = usize;

/// Rooted tree with ordered children. Node ids are post-order: every child id
/// is smaller than its parent id, and the root is the last node. That makes
/// bottom-up passes plain index loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressedTree {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    root: NodeId,
}

impl AddressedTree {
    pub fn from_parents(parent: Vec<Option<NodeId>>, children: Vec<Vec<NodeId>>) -> Self {
        let mut root = None;
        for (u, p) in parent.iter().enumerate() {
            match p {
                None => {
                    assert!(root.is_none(), "multiple roots");
                    root = Some(u);
                }
                Some(p) => {
                    assert!(children[*p].contains(&u), "parent/children mismatch at {u}");
                    assert!(*p > u, "node ids must be post-order (child {u} under {p})");
                }
            }
        }
        let root = root.expect("tree needs a root");
        for (u, ch) in children.iter().enumerate() {
            for &c in ch {
                assert_eq!(parent[c], Some(u), "child link without parent link");
            }
        }
        AddressedTree { parent, children, root }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.parent[u]
    }

    pub fn children(&self, u: NodeId) -> &[NodeId] {
        &self.children[u]
    }

    /// Nodes in bottom-up evaluation order (children strictly before parents).
    pub fn bottom_up(&self) -> impl Iterator<Item = NodeId> {
        0..self.len()
    }
}

/// Node operation in a nice edge-introducing decomposition. Intro-edge nodes
/// carry the edge's endpoints so table runs need no graph lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    IntroVertex(VertexId),
    ForgetVertex(VertexId),
    IntroEdge(EdgeId, VertexId, VertexId),
    Join,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Leaf => write!(f, "leaf"),
            NodeKind::IntroVertex(v) => write!(f, "iv {v}"),
            NodeKind::ForgetVertex(v) => write!(f, "fv {v}"),
            NodeKind::IntroEdge(e, u, v) => write!(f, "ie {e} {u} {v}"),
            NodeKind::Join => write!(f, "join"),
        }
    }
}

/// Not-necessarily-nice tree decomposition: bags plus tree edges between bag
/// indices (0-based internally; PACE ids are 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDecomposition {
    pub bags: Vec<BTreeSet<VertexId>>,
    pub edges: Vec<(usize, usize)>,
}

impl RawDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// PACE-2017 style `.td` output.
    pub fn to_td(&self, n_vertices: usize) -> String {
        let mut out = format!("s td {} {} {}\n", self.bags.len(), self.width() + 1, n_vertices);
        for (i, bag) in self.bags.iter().enumerate() {
            let items: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
            if items.is_empty() {
                out.push_str(&format!("b {}\n", i + 1));
            } else {
                out.push_str(&format!("b {} {}\n", i + 1, items.join(" ")));
            }
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdParseError {
    #[error("line {line}: malformed line: {text}")]
    Malformed { line: usize, text: String },
    #[error("missing `s td <#bags> <width+1> <n>` header")]
    MissingHeader,
    #[error("line {line}: duplicate bag id {id}")]
    DuplicateBag { line: usize, id: usize },
    #[error("line {line}: bag id {id} out of range 1..={max}")]
    BagIdOutOfRange { line: usize, id: usize, max: usize },
    #[error("line {line}: bag references unknown vertex {v}")]
    UnknownVertex { line: usize, v: VertexId },
    #[error("decomposition tree is disconnected or has a cycle")]
    NotATree,
}

/// Parses a PACE-style `.td` document against a graph. Structural errors
/// (duplicate ids, unknown vertices, non-tree shape) are rejected here;
/// the decomposition conditions themselves are checked by [`validate_raw`].
pub fn parse_td(text: &str, g: &Graph) -> Result<RawDecomposition, TdParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<BTreeSet<VertexId>>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let malformed = || TdParseError::Malformed { line, text: raw.to_string() };
        let mut parts = trimmed.split_whitespace();
        let tag = parts.next().unwrap();
        match tag {
            "s" => {
                if header.is_some() || parts.next() != Some("td") {
                    return Err(malformed());
                }
                let nb: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                let _w: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                header = Some((nb, n));
                bags = vec![None; nb];
            }
            "b" => {
                let (nb, _) = header.ok_or(TdParseError::MissingHeader)?;
                let id: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                if id == 0 || id > nb {
                    return Err(TdParseError::BagIdOutOfRange { line, id, max: nb });
                }
                if bags[id - 1].is_some() {
                    return Err(TdParseError::DuplicateBag { line, id });
                }
                let mut bag = BTreeSet::new();
                for p in parts {
                    let v: VertexId = p.parse().map_err(|_| malformed())?;
                    if !g.contains_vertex(v) {
                        return Err(TdParseError::UnknownVertex { line, v });
                    }
                    bag.insert(v);
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let (nb, _) = header.ok_or(TdParseError::MissingHeader)?;
                let a: usize = tag.parse().map_err(|_| malformed())?;
                let b: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                if parts.next().is_some() {
                    return Err(malformed());
                }
                for id in [a, b] {
                    if id == 0 || id > nb {
                        return Err(TdParseError::BagIdOutOfRange { line, id, max: nb });
                    }
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (nb, _) = header.ok_or(TdParseError::MissingHeader)?;
    let bags: Vec<BTreeSet<VertexId>> =
        bags.into_iter().map(|b| b.unwrap_or_default()).collect();
    // Tree shape: nb-1 edges and connected.
    if nb > 0 {
        if edges.len() != nb - 1 || !bag_graph_connected(nb, &edges) {
            return Err(TdParseError::NotATree);
        }
    }
    Ok(RawDecomposition { bags, edges })
}

fn bag_graph_connected(nb: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); nb];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; nb];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == nb
}

/// One violated raw-decomposition condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawViolation {
    NotATree,
    VertexNotCovered(VertexId),
    EdgeNotCovered(EdgeId),
    VertexOccurrenceDisconnected(VertexId),
    UnknownVertexInBag(usize, VertexId),
}

impl fmt::Display for RawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawViolation::NotATree => write!(f, "bag graph is not a tree"),
            RawViolation::VertexNotCovered(v) => {
                write!(f, "coverage condition: vertex {v} appears in no bag")
            }
            RawViolation::EdgeNotCovered(e) => {
                write!(f, "edge condition: no bag contains both endpoints of edge {e}")
            }
            RawViolation::VertexOccurrenceDisconnected(v) => {
                write!(f, "connectivity condition: bags containing vertex {v} are disconnected")
            }
            RawViolation::UnknownVertexInBag(b, v) => {
                write!(f, "bag {b} references unknown vertex {v}")
            }
        }
    }
}

pub fn validate_raw(g: &Graph, raw: &RawDecomposition) -> Vec<RawViolation> {
    let mut out = Vec::new();
    let nb = raw.bags.len();
    if nb == 0 || raw.edges.len() != nb - 1 || !bag_graph_connected(nb, &raw.edges) {
        out.push(RawViolation::NotATree);
        return out;
    }
    for (i, bag) in raw.bags.iter().enumerate() {
        for &v in bag {
            if !g.contains_vertex(v) {
                out.push(RawViolation::UnknownVertexInBag(i, v));
            }
        }
    }
    for v in g.vertices() {
        let occ: Vec<usize> =
            (0..nb).filter(|&i| raw.bags[i].contains(&v)).collect();
        if occ.is_empty() {
            out.push(RawViolation::VertexNotCovered(v));
        } else if !induced_connected(nb, &raw.edges, &occ) {
            out.push(RawViolation::VertexOccurrenceDisconnected(v));
        }
    }
    for (e, (u, v)) in g.edges() {
        if !raw.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            out.push(RawViolation::EdgeNotCovered(e));
        }
    }
    out
}

fn induced_connected(nb: usize, edges: &[(usize, usize)], occ: &[usize]) -> bool {
    let inside: BTreeSet<usize> = occ.iter().copied().collect();
    let mut adj = vec![Vec::new(); nb];
    for &(a, b) in edges {
        if inside.contains(&a) && inside.contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = BTreeSet::from([occ[0]]);
    let mut stack = vec![occ[0]];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == occ.len()
}

/// Min-fill elimination heuristic. Ties break on the lowest vertex id, so the
/// output is reproducible. No optimality promise: width >= tw(g).
pub fn build_heuristic_td(g: &Graph) -> RawDecomposition {
    if g.n() == 0 {
        return RawDecomposition { bags: vec![BTreeSet::new()], edges: vec![] };
    }
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
        g.vertices().map(|v| (v, g.neighbors(v))).collect();
    let mut remaining: BTreeSet<VertexId> = g.vertices().collect();
    let mut order: Vec<VertexId> = Vec::new();
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut elim_nbrs: Vec<BTreeSet<VertexId>> = Vec::new();
    while !remaining.is_empty() {
        let v = *remaining
            .iter()
            .min_by_key(|&&v| (fill_count(&adj, v), v))
            .unwrap();
        let nbrs = adj[&v].clone();
        let mut bag = nbrs.clone();
        bag.insert(v);
        for &a in &nbrs {
            for &b in &nbrs {
                if a < b {
                    adj.get_mut(&a).unwrap().insert(b);
                    adj.get_mut(&b).unwrap().insert(a);
                }
            }
        }
        for &a in &nbrs {
            adj.get_mut(&a).unwrap().remove(&v);
        }
        adj.remove(&v);
        remaining.remove(&v);
        order.push(v);
        bags.push(bag);
        elim_nbrs.push(nbrs);
    }
    let position: BTreeMap<VertexId, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for i in 0..bags.len() - 1 {
        let parent = elim_nbrs[i]
            .iter()
            .map(|w| position[w])
            .min()
            .unwrap_or(i + 1);
        edges.push((i, parent));
    }
    RawDecomposition { bags, edges }
}

fn fill_count(adj: &BTreeMap<VertexId, BTreeSet<VertexId>>, v: VertexId) -> usize {
    let nbrs: Vec<VertexId> = adj[&v].iter().copied().collect();
    let mut fill = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[&a].contains(&b) {
                fill += 1;
            }
        }
    }
    fill
}

/// Nice edge-introducing tree decomposition. Node ids are post-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub tree: AddressedTree,
    pub bags: Vec<BTreeSet<VertexId>>,
    pub kinds: Vec<NodeKind>,
    /// xi: which node introduces each edge (injective).
    pub edge_node: BTreeMap<EdgeId, NodeId>,
}

impl NiceDecomposition {
    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn root(&self) -> NodeId {
        self.tree.root()
    }

    /// `.ntd` text format: header, then one line per node in ascending
    /// (post-order) id with its parent and kind.
    pub fn to_ntd(&self, n_vertices: usize) -> String {
        let mut out = format!(
            "s ntd {} {} {}\n",
            self.len(),
            self.width() + 1,
            n_vertices
        );
        for u in 0..self.len() {
            let parent = match self.tree.parent(u) {
                Some(p) => p.to_string(),
                None => "-".to_string(),
            };
            out.push_str(&format!("n {u} {parent} {}\n", self.kinds[u]));
        }
        out
    }

    pub fn from_ntd(text: &str) -> Result<NiceDecomposition, TdParseError> {
        let mut header: Option<usize> = None;
        let mut parents: Vec<Option<NodeId>> = Vec::new();
        let mut kinds: Vec<NodeKind> = Vec::new();
        let mut seen: Vec<bool> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            let malformed = || TdParseError::Malformed { line, text: raw.to_string() };
            let mut parts = trimmed.split_whitespace();
            match parts.next().unwrap() {
                "s" => {
                    if parts.next() != Some("ntd") {
                        return Err(malformed());
                    }
                    let count: usize =
                        parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                    header = Some(count);
                    parents = vec![None; count];
                    kinds = vec![NodeKind::Leaf; count];
                    seen = vec![false; count];
                }
                "n" => {
                    let count = header.ok_or(TdParseError::MissingHeader)?;
                    let id: usize =
                        parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
                    if id >= count {
                        return Err(TdParseError::BagIdOutOfRange { line, id, max: count });
                    }
                    if seen[id] {
                        return Err(TdParseError::DuplicateBag { line, id });
                    }
                    seen[id] = true;
                    let ptok = parts.next().ok_or_else(malformed)?;
                    parents[id] = if ptok == "-" {
                        None
                    } else {
                        Some(ptok.parse().map_err(|_| malformed())?)
                    };
                    kinds[id] = match parts.next().ok_or_else(malformed)? {
                        "leaf" => NodeKind::Leaf,
                        "iv" => NodeKind::IntroVertex(
                            parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?,
                        ),
                        "fv" => NodeKind::ForgetVertex(
                            parts.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?,
                        ),
                        "ie" => {
                            let e = parts
                                .next()
                                .and_then(|s| s.parse().ok())
                                .ok_or_else(malformed)?;
                            let u = parts
                                .next()
                                .and_then(|s| s.parse().ok())
                                .ok_or_else(malformed)?;
                            let v = parts
                                .next()
                                .and_then(|s| s.parse().ok())
                                .ok_or_else(malformed)?;
                            NodeKind::IntroEdge(e, u, v)
                        }
                        "join" => NodeKind::Join,
                        _ => return Err(malformed()),
                    };
                }
                _ => return Err(malformed()),
            }
        }
        let count = header.ok_or(TdParseError::MissingHeader)?;
        if count == 0 || !seen.iter().all(|&s| s) {
            return Err(TdParseError::NotATree);
        }
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); count];
        for (u, p) in parents.iter().enumerate() {
            if let Some(p) = p {
                if *p >= count || *p <= u {
                    return Err(TdParseError::NotATree);
                }
                children[*p].push(u);
            }
        }
        if parents.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(TdParseError::NotATree);
        }
        let tree = AddressedTree::from_parents(parents, children);
        Ok(assemble_nice(tree, kinds))
    }
}

/// Recomputes bags bottom-up from node kinds and collects xi.
fn assemble_nice(tree: AddressedTree, kinds: Vec<NodeKind>) -> NiceDecomposition {
    let mut bags: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); tree.len()];
    let mut edge_node = BTreeMap::new();
    for u in tree.bottom_up() {
        let bag = match kinds[u] {
            NodeKind::Leaf => BTreeSet::new(),
            NodeKind::IntroVertex(v) => {
                let mut b = bags[tree.children(u)[0]].clone();
                b.insert(v);
                b
            }
            NodeKind::ForgetVertex(v) => {
                let mut b = bags[tree.children(u)[0]].clone();
                b.remove(&v);
                b
            }
            NodeKind::IntroEdge(e, _, _) => {
                edge_node.insert(e, u);
                bags[tree.children(u)[0]].clone()
            }
            NodeKind::Join => bags[tree.children(u)[0]].clone(),
        };
        bags[u] = bag;
    }
    NiceDecomposition { tree, bags, kinds, edge_node }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MakeNiceError {
    #[error("raw decomposition invalid: {0}")]
    InvalidRaw(String),
}

/// Turns a valid raw decomposition into a nice edge-introducing one.
///
/// Root and leaves get empty bags via forget and intro chains; each edge gets
/// a fresh intro-edge node directly above the node where its later endpoint
/// enters the bag, chained in ascending edge order when several edges share
/// that point. Width never increases.
pub fn make_nice(g: &Graph, raw: &RawDecomposition) -> Result<NiceDecomposition, MakeNiceError> {
    let violations = validate_raw(g, raw);
    if let Some(v) = violations.first() {
        return Err(MakeNiceError::InvalidRaw(v.to_string()));
    }
    let nb = raw.bags.len();
    // Root the raw tree at the last bag.
    let raw_root = nb - 1;
    let mut raw_children: Vec<Vec<usize>> = vec![Vec::new(); nb];
    {
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in &raw.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut seen = vec![false; nb];
        let mut stack = vec![raw_root];
        seen[raw_root] = true;
        let mut order = Vec::new();
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    raw_children[u].push(w);
                    stack.push(w);
                }
            }
        }
    }

    let mut builder = Builder::default();
    let top = builder.region(raw, &raw_children, raw_root);
    // Forget chain down to the empty root bag.
    let mut cur = top;
    for &v in raw.bags[raw_root].clone().iter() {
        cur = builder.push(BNode::unary(NodeKind::ForgetVertex(v), cur));
    }
    builder.insert_edges(g, cur);
    Ok(builder.finish(cur))
}

#[derive(Debug)]
struct BNode {
    kind: NodeKind,
    children: Vec<usize>,
    bag: BTreeSet<VertexId>,
}

impl BNode {
    fn unary(kind: NodeKind, child: usize) -> (NodeKind, Vec<usize>) {
        (kind, vec![child])
    }
}

#[derive(Default)]
struct Builder {
    nodes: Vec<BNode>,
}

impl Builder {
    fn push(&mut self, (kind, children): (NodeKind, Vec<usize>)) -> usize {
        let bag = match kind {
            NodeKind::Leaf => BTreeSet::new(),
            NodeKind::IntroVertex(v) => {
                let mut b = self.nodes[children[0]].bag.clone();
                b.insert(v);
                b
            }
            NodeKind::ForgetVertex(v) => {
                let mut b = self.nodes[children[0]].bag.clone();
                b.remove(&v);
                b
            }
            NodeKind::IntroEdge(..) | NodeKind::Join => self.nodes[children[0]].bag.clone(),
        };
        self.nodes.push(BNode { kind, children, bag });
        self.nodes.len() - 1
    }

    /// Builds the skeleton for the subtree of raw node `u`; the returned node
    /// has bag equal to the raw bag of `u`.
    fn region(&mut self, raw: &RawDecomposition, raw_children: &[Vec<usize>], u: usize) -> usize {
        let bag_u = &raw.bags[u];
        if raw_children[u].is_empty() {
            let mut cur = self.push((NodeKind::Leaf, vec![]));
            for &v in bag_u {
                cur = self.push(BNode::unary(NodeKind::IntroVertex(v), cur));
            }
            return cur;
        }
        let mut tops = Vec::new();
        for &c in &raw_children[u] {
            let mut cur = self.region(raw, raw_children, c);
            for &v in raw.bags[c].difference(bag_u) {
                cur = self.push(BNode::unary(NodeKind::ForgetVertex(v), cur));
            }
            for &v in bag_u.difference(&raw.bags[c]) {
                cur = self.push(BNode::unary(NodeKind::IntroVertex(v), cur));
            }
            tops.push(cur);
        }
        let mut acc = tops[0];
        for &t in &tops[1..] {
            acc = self.push((NodeKind::Join, vec![acc, t]));
        }
        acc
    }

    /// Hangs each edge's intro node directly above the intro-vertex node where
    /// its later endpoint arrives with the other endpoint already in the bag.
    fn insert_edges(&mut self, g: &Graph, top: usize) {
        // Anchor per edge: the first qualifying intro-vertex node in
        // post-order (children in order), which is deterministic.
        let mut anchors: BTreeMap<EdgeId, usize> = BTreeMap::new();
        let order = self.postorder(top);
        for &n in &order {
            if let NodeKind::IntroVertex(v) = self.nodes[n].kind {
                for (e, (a, b)) in g.edges() {
                    if anchors.contains_key(&e) {
                        continue;
                    }
                    let other = if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    };
                    if let Some(o) = other {
                        if self.nodes[n].bag.contains(&o) {
                            anchors.insert(e, n);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(anchors.len(), g.m(), "every edge needs an anchor");
        // Group by anchor and splice in chains, ascending edge ids bottom-up.
        let mut by_anchor: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
        for (e, n) in anchors {
            by_anchor.entry(n).or_default().push(e);
        }
        for (anchor, edge_list) in by_anchor {
            let parent = self
                .nodes
                .iter()
                .position(|n| n.children.contains(&anchor))
                .expect("anchor has a parent: the top has an empty bag");
            let mut cur = anchor;
            for e in edge_list {
                let (u, v) = g.endpoints(e).unwrap();
                cur = self.push(BNode::unary(NodeKind::IntroEdge(e, u, v), cur));
            }
            let slot = self.nodes[parent]
                .children
                .iter()
                .position(|&c| c == anchor)
                .unwrap();
            self.nodes[parent].children[slot] = cur;
        }
    }

    fn postorder(&self, top: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(top, false)];
        while let Some((u, expanded)) = stack.pop() {
            if expanded {
                order.push(u);
            } else {
                stack.push((u, true));
                for &c in self.nodes[u].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Renumbers post-order and produces the final decomposition.
    fn finish(self, top: usize) -> NiceDecomposition {
        let order = self.postorder(top);
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (i, &n) in order.iter().enumerate() {
            new_id[n] = i;
        }
        let count = order.len();
        let mut parents: Vec<Option<NodeId>> = vec![None; count];
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); count];
        let mut bags: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); count];
        let mut kinds: Vec<NodeKind> = vec![NodeKind::Leaf; count];
        let mut edge_node = BTreeMap::new();
        for &n in &order {
            let id = new_id[n];
            bags[id] = self.nodes[n].bag.clone();
            kinds[id] = self.nodes[n].kind;
            if let NodeKind::IntroEdge(e, _, _) = self.nodes[n].kind {
                edge_node.insert(e, id);
            }
            for &c in &self.nodes[n].children {
                let cid = new_id[c];
                parents[cid] = Some(id);
                children[id].push(cid);
            }
        }
        let tree = AddressedTree::from_parents(parents, children);
        NiceDecomposition { tree, bags, kinds, edge_node }
    }
}

/// One violated niceness condition, naming the offender.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NiceViolation {
    RootBagNotEmpty(NodeId),
    LeafBagNotEmpty(NodeId),
    WrongChildCount { node: NodeId, expected: usize, found: usize },
    IntroVertexBagMismatch { node: NodeId, v: VertexId },
    ForgetVertexBagMismatch { node: NodeId, v: VertexId },
    IntroEdgeBagMismatch { node: NodeId, e: EdgeId },
    EndpointsNotInBag { node: NodeId, e: EdgeId },
    JoinBagMismatch(NodeId),
    EdgeNotIntroduced(EdgeId),
    EdgeIntroducedTwice(EdgeId),
    UnknownEdge { node: NodeId, e: EdgeId },
    VertexNotCovered(VertexId),
    VertexOccurrenceDisconnected(VertexId),
    VertexReintroduced { node: NodeId, v: VertexId },
}

impl fmt::Display for NiceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NiceViolation::*;
        match self {
            RootBagNotEmpty(u) => write!(f, "niceness: root node {u} has a nonempty bag"),
            LeafBagNotEmpty(u) => write!(f, "niceness: leaf node {u} has a nonempty bag"),
            WrongChildCount { node, expected, found } => write!(
                f,
                "niceness: node {node} has {found} children, expected {expected}"
            ),
            IntroVertexBagMismatch { node, v } => write!(
                f,
                "niceness: intro-vertex node {node} does not add exactly vertex {v}"
            ),
            ForgetVertexBagMismatch { node, v } => write!(
                f,
                "niceness: forget-vertex node {node} does not remove exactly vertex {v}"
            ),
            IntroEdgeBagMismatch { node, e } => write!(
                f,
                "niceness: intro-edge node {node} for edge {e} changes the bag"
            ),
            EndpointsNotInBag { node, e } => write!(
                f,
                "edge condition: endpoints of edge {e} not inside the bag of its intro node {node}"
            ),
            JoinBagMismatch(u) => {
                write!(f, "niceness: join node {u} has children with differing bags")
            }
            EdgeNotIntroduced(e) => write!(f, "xi condition: edge {e} is never introduced"),
            EdgeIntroducedTwice(e) => {
                write!(f, "xi condition: edge {e} is introduced more than once")
            }
            UnknownEdge { node, e } => {
                write!(f, "node {node} introduces unknown edge {e}")
            }
            VertexNotCovered(v) => {
                write!(f, "coverage condition: vertex {v} appears in no bag")
            }
            VertexOccurrenceDisconnected(v) => write!(
                f,
                "connectivity condition: bags containing vertex {v} are disconnected"
            ),
            VertexReintroduced { node, v } => write!(
                f,
                "niceness: node {node} introduces vertex {v} already in the child bag"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<NiceViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every nice edge-introducing decomposition invariant against `g` and
/// lists each violation. Empty report iff valid.
pub fn validate_nice(g: &Graph, nd: &NiceDecomposition) -> ValidationReport {
    let mut v = Vec::new();
    let tree = &nd.tree;
    for u in 0..nd.len() {
        let ch = tree.children(u);
        match nd.kinds[u] {
            NodeKind::Leaf => {
                if !ch.is_empty() {
                    v.push(NiceViolation::WrongChildCount { node: u, expected: 0, found: ch.len() });
                }
                if !nd.bags[u].is_empty() {
                    v.push(NiceViolation::LeafBagNotEmpty(u));
                }
            }
            NodeKind::IntroVertex(x) => {
                if ch.len() != 1 {
                    v.push(NiceViolation::WrongChildCount { node: u, expected: 1, found: ch.len() });
                    continue;
                }
                let cb = &nd.bags[ch[0]];
                if cb.contains(&x) {
                    v.push(NiceViolation::VertexReintroduced { node: u, v: x });
                }
                let mut want = cb.clone();
                want.insert(x);
                if nd.bags[u] != want {
                    v.push(NiceViolation::IntroVertexBagMismatch { node: u, v: x });
                }
            }
            NodeKind::ForgetVertex(x) => {
                if ch.len() != 1 {
                    v.push(NiceViolation::WrongChildCount { node: u, expected: 1, found: ch.len() });
                    continue;
                }
                let cb = &nd.bags[ch[0]];
                if !cb.contains(&x) {
                    v.push(NiceViolation::ForgetVertexBagMismatch { node: u, v: x });
                    continue;
                }
                let mut want = cb.clone();
                want.remove(&x);
                if nd.bags[u] != want {
                    v.push(NiceViolation::ForgetVertexBagMismatch { node: u, v: x });
                }
            }
            NodeKind::IntroEdge(e, a, b) => {
                if ch.len() != 1 {
                    v.push(NiceViolation::WrongChildCount { node: u, expected: 1, found: ch.len() });
                    continue;
                }
                if nd.bags[u] != nd.bags[ch[0]] {
                    v.push(NiceViolation::IntroEdgeBagMismatch { node: u, e });
                }
                match g.endpoints(e) {
                    Some(ep) if ep == (a.min(b), a.max(b)) => {
                        if !(nd.bags[u].contains(&a) && nd.bags[u].contains(&b)) {
                            v.push(NiceViolation::EndpointsNotInBag { node: u, e });
                        }
                    }
                    _ => v.push(NiceViolation::UnknownEdge { node: u, e }),
                }
            }
            NodeKind::Join => {
                if ch.len() != 2 {
                    v.push(NiceViolation::WrongChildCount { node: u, expected: 2, found: ch.len() });
                    continue;
                }
                if nd.bags[ch[0]] != nd.bags[u] || nd.bags[ch[1]] != nd.bags[u] {
                    v.push(NiceViolation::JoinBagMismatch(u));
                }
            }
        }
    }
    if !nd.bags[nd.root()].is_empty() {
        v.push(NiceViolation::RootBagNotEmpty(nd.root()));
    }
    // xi: total, injective, consistent with node kinds.
    let mut intro_count: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for u in 0..nd.len() {
        if let NodeKind::IntroEdge(e, _, _) = nd.kinds[u] {
            *intro_count.entry(e).or_insert(0) += 1;
        }
    }
    for e in g.edge_ids() {
        match intro_count.get(&e) {
            None => v.push(NiceViolation::EdgeNotIntroduced(e)),
            Some(1) => {
                if nd
                    .edge_node
                    .get(&e)
                    .map(|&n| !matches!(nd.kinds[n], NodeKind::IntroEdge(e2, _, _) if e2 == e))
                    .unwrap_or(true)
                {
                    v.push(NiceViolation::EdgeNotIntroduced(e));
                }
            }
            Some(_) => v.push(NiceViolation::EdgeIntroducedTwice(e)),
        }
    }
    // Vertex coverage and occurrence connectivity.
    for x in g.vertices() {
        let occ: Vec<NodeId> = (0..nd.len()).filter(|&u| nd.bags[u].contains(&x)).collect();
        if occ.is_empty() {
            v.push(NiceViolation::VertexNotCovered(x));
            continue;
        }
        let inside: BTreeSet<NodeId> = occ.iter().copied().collect();
        let mut seen = BTreeSet::from([occ[0]]);
        let mut stack = vec![occ[0]];
        while let Some(u) = stack.pop() {
            let mut nbrs: Vec<NodeId> = tree.children(u).to_vec();
            if let Some(p) = tree.parent(u) {
                nbrs.push(p);
            }
            for w in nbrs {
                if inside.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != occ.len() {
            v.push(NiceViolation::VertexOccurrenceDisconnected(x));
        }
    }
    ValidationReport { violations: v }
}

/// Designated nodes: `nu(v)` is the child of the node forgetting `v`;
/// `eps(e)` is the node introducing `e` (equals xi).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignatedIndex {
    pub nu: BTreeMap<VertexId, NodeId>,
    pub eps: BTreeMap<EdgeId, NodeId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignatedError {
    #[error("vertex {0} is never forgotten (decomposition invalid)")]
    VertexNeverForgotten(VertexId),
}

pub fn designated_index(nd: &NiceDecomposition) -> Result<DesignatedIndex, DesignatedError> {
    let mut nu = BTreeMap::new();
    let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
    for bag in &nd.bags {
        vertices.extend(bag.iter().copied());
    }
    for u in 0..nd.len() {
        if let NodeKind::ForgetVertex(v) = nd.kinds[u] {
            nu.insert(v, nd.tree.children(u)[0]);
        }
    }
    for v in vertices {
        if !nu.contains_key(&v) {
            return Err(DesignatedError::VertexNeverForgotten(v));
        }
    }
    Ok(DesignatedIndex { nu, eps: nd.edge_node.clone() })
}
