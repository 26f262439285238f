//! The linear system describing the convex hull of accepting-trace vectors:
//! main variables per (node, symbol), state variables per automaton state,
//! transition variables per transition, tied together by six constraint
//! families (variable bounds, the root final-state sum, zeroed non-final
//! root states, per-state incoming sums, per-state parent outgoing sums, and
//! per-symbol sums). All coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::automaton::{SymbolId, TShapedAutomaton, Term, Trace, Transition};
use crate::decomposition::{DesignatedIndex, NodeId};
use crate::graph::{EdgeId, VertexId};
use crate::rational::{parse_rat, rat, to_terminating_decimal, Rat};

/// Variable identity. The derived order (all Main, then State, then Trans,
/// each in (node, index) order) is the emission order of the LP columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKey {
    /// x_{u,a}: node u is labeled with symbol a.
    Main(NodeId, SymbolId),
    /// y_{u,q}: state q is assumed at node u.
    State(NodeId, usize),
    /// z_{u,delta}: transition delta is taken at node u.
    Trans(NodeId, usize),
}

impl VarKey {
    pub fn name(&self) -> String {
        match self {
            VarKey::Main(u, a) => format!("x_n{u}_s{a}"),
            VarKey::State(u, q) => format!("y_n{u}_w{q}"),
            VarKey::Trans(u, t) => format!("z_n{u}_t{t}"),
        }
    }

    pub fn parse_name(s: &str) -> Option<VarKey> {
        let (kind, rest) = s.split_at(1);
        let rest = rest.strip_prefix("_n")?;
        let (node, idx) = rest.split_once('_')?;
        let node: usize = node.parse().ok()?;
        match kind {
            "x" => Some(VarKey::Main(node, idx.strip_prefix('s')?.parse().ok()?)),
            "y" => Some(VarKey::State(node, idx.strip_prefix('w')?.parse().ok()?)),
            "z" => Some(VarKey::Trans(node, idx.strip_prefix('t')?.parse().ok()?)),
            _ => None,
        }
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Constraint family, numbered 2..=7 in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// (2): 0 <= v <= 1 for every variable.
    Bounds,
    /// (3): the final root states sum to 1.
    FinalRoot,
    /// (4): non-final root states are 0.
    NonFinalRoot,
    /// (5): transitions with consequent q sum to y_{u,q}.
    Consequent,
    /// (6): parent transitions with antecedent q sum to y_{u,q}.
    Antecedent,
    /// (7): transitions labeled a sum to x_{u,a}.
    SymbolSum,
}

impl Family {
    pub fn number(&self) -> u8 {
        match self {
            Family::Bounds => 2,
            Family::FinalRoot => 3,
            Family::NonFinalRoot => 4,
            Family::Consequent => 5,
            Family::Antecedent => 6,
            Family::SymbolSum => 7,
        }
    }

    fn from_number(n: u8) -> Option<Family> {
        Some(match n {
            2 => Family::Bounds,
            3 => Family::FinalRoot,
            4 => Family::NonFinalRoot,
            5 => Family::Consequent,
            6 => Family::Antecedent,
            7 => Family::SymbolSum,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    fn symbol(&self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// One row: sum of coeffs (sorted by variable) relation rhs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub family: Family,
    pub coeffs: Vec<(VarKey, Rat)>,
    pub relation: Relation,
    pub rhs: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSizes {
    pub nodes: usize,
    pub sigma: usize,
    pub states: usize,
    pub root_states: usize,
    pub finals: usize,
    pub transitions: usize,
}

impl SystemSizes {
    pub fn expected_variables(&self) -> usize {
        self.nodes * self.sigma + self.states + self.transitions
    }

    pub fn expected_equalities(&self) -> usize {
        1 + (self.root_states - self.finals)
            + self.states
            + (self.states - self.root_states)
            + self.nodes * self.sigma
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    /// All variables in emission order.
    pub vars: Vec<VarKey>,
    /// Equality families (3)..(7) first, then the bound rows of family (2),
    /// two per variable (>= 0, <= 1), in variable order.
    pub constraints: Vec<Constraint>,
    pub sizes: SystemSizes,
}

impl LinearSystem {
    pub fn variable_count(&self) -> usize {
        self.vars.len()
    }

    pub fn equality_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.family != Family::Bounds).count()
    }

    pub fn bound_pair_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.family == Family::Bounds).count() / 2
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.family != Family::Bounds)
    }

    pub fn var_index(&self) -> BTreeMap<VarKey, usize> {
        self.vars.iter().enumerate().map(|(i, &k)| (k, i)).collect()
    }
}

/// Sparse exact-rational vector over the system's variables; absent keys are
/// zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalVector {
    entries: BTreeMap<VarKey, Rat>,
}

impl RationalVector {
    pub fn new() -> Self {
        RationalVector { entries: BTreeMap::new() }
    }

    pub fn from_entries(entries: BTreeMap<VarKey, Rat>) -> Self {
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        RationalVector { entries }
    }

    pub fn get(&self, k: &VarKey) -> Rat {
        self.entries.get(k).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn set(&mut self, k: VarKey, v: Rat) {
        if v.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, v);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &VarKey> {
        self.entries.keys()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarKey, &Rat)> {
        self.entries.iter()
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.values().all(|v| v.is_one())
    }

    /// v - alpha * w, exact.
    pub fn sub_scaled(&self, alpha: &Rat, w: &RationalVector) -> RationalVector {
        let mut out = self.entries.clone();
        for (k, val) in w.iter() {
            let cur = out.remove(k).unwrap_or_else(|| rat(0));
            let next = cur - alpha.clone() * val.clone();
            if !next.is_zero() {
                out.insert(*k, next);
            }
        }
        RationalVector { entries: out }
    }

    pub fn scale(&self, factor: &Rat) -> RationalVector {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (*k, v.clone() * factor.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        RationalVector { entries }
    }

    pub fn add_scaled(&self, alpha: &Rat, w: &RationalVector) -> RationalVector {
        self.sub_scaled(&(-alpha.clone()), w)
    }
}

/// Builds the full system for an automaton and asserts the size identities:
/// #variables = |T|*|Sigma| + |Q| + |Delta| and
/// #equalities = 1 + (|Q_r|-|F|) + |Q| + (|Q|-|Q_r|) + |T|*|Sigma|.
pub fn build_system(a: &TShapedAutomaton) -> LinearSystem {
    let n = a.node_count();
    let sigma = a.alphabet.len();
    let root = a.root();
    let mut vars: Vec<VarKey> = Vec::new();
    for u in 0..n {
        for s in 0..sigma {
            vars.push(VarKey::Main(u, s));
        }
    }
    for u in 0..n {
        for q in 0..a.cells[u].len() {
            vars.push(VarKey::State(u, q));
        }
    }
    for u in 0..n {
        for t in 0..a.transitions[u].len() {
            vars.push(VarKey::Trans(u, t));
        }
    }
    debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));

    let mut constraints: Vec<Constraint> = Vec::new();
    // (3) the final root states sum to 1.
    constraints.push(Constraint {
        family: Family::FinalRoot,
        coeffs: a.finals.iter().map(|&q| (VarKey::State(root, q), rat(1))).collect(),
        relation: Relation::Eq,
        rhs: rat(1),
    });
    // (4) non-final root states are 0.
    for q in 0..a.cells[root].len() {
        if !a.finals.contains(&q) {
            constraints.push(Constraint {
                family: Family::NonFinalRoot,
                coeffs: vec![(VarKey::State(root, q), rat(1))],
                relation: Relation::Eq,
                rhs: rat(0),
            });
        }
    }
    // (5) incoming transitions sum to the state variable.
    for u in 0..n {
        for q in 0..a.cells[u].len() {
            let mut coeffs: Vec<(VarKey, Rat)> = a.transitions[u]
                .iter()
                .enumerate()
                .filter(|(_, tr)| tr.consequent == q)
                .map(|(t, _)| (VarKey::Trans(u, t), rat(1)))
                .collect();
            coeffs.push((VarKey::State(u, q), rat(-1)));
            coeffs.sort_by(|x, y| x.0.cmp(&y.0));
            constraints.push(Constraint {
                family: Family::Consequent,
                coeffs,
                relation: Relation::Eq,
                rhs: rat(0),
            });
        }
    }
    // (6) parent transitions using the state as an antecedent sum to it.
    for u in 0..n {
        if u == root {
            continue;
        }
        let p = a.shape.parent(u).unwrap();
        let slot = a.shape.children(p).iter().position(|&c| c == u).unwrap();
        for q in 0..a.cells[u].len() {
            let mut coeffs: Vec<(VarKey, Rat)> = a.transitions[p]
                .iter()
                .enumerate()
                .filter(|(_, tr)| tr.antecedents[slot] == q)
                .map(|(t, _)| (VarKey::Trans(p, t), rat(1)))
                .collect();
            coeffs.push((VarKey::State(u, q), rat(-1)));
            coeffs.sort_by(|x, y| x.0.cmp(&y.0));
            constraints.push(Constraint {
                family: Family::Antecedent,
                coeffs,
                relation: Relation::Eq,
                rhs: rat(0),
            });
        }
    }
    // (7) same-symbol transitions sum to the main variable.
    for u in 0..n {
        for s in 0..sigma {
            let mut coeffs: Vec<(VarKey, Rat)> = a.transitions[u]
                .iter()
                .enumerate()
                .filter(|(_, tr)| tr.symbol == s)
                .map(|(t, _)| (VarKey::Trans(u, t), rat(1)))
                .collect();
            coeffs.push((VarKey::Main(u, s), rat(-1)));
            coeffs.sort_by(|x, y| x.0.cmp(&y.0));
            constraints.push(Constraint {
                family: Family::SymbolSum,
                coeffs,
                relation: Relation::Eq,
                rhs: rat(0),
            });
        }
    }
    // (2) bounds, two rows per variable.
    for &v in &vars {
        constraints.push(Constraint {
            family: Family::Bounds,
            coeffs: vec![(v, rat(1))],
            relation: Relation::Ge,
            rhs: rat(0),
        });
        constraints.push(Constraint {
            family: Family::Bounds,
            coeffs: vec![(v, rat(1))],
            relation: Relation::Le,
            rhs: rat(1),
        });
    }

    let sizes = SystemSizes {
        nodes: n,
        sigma,
        states: a.state_count(),
        root_states: a.cells[root].len(),
        finals: a.finals.len(),
        transitions: a.transition_count(),
    };
    let sys = LinearSystem { vars, constraints, sizes };
    assert_eq!(sys.variable_count(), sizes.expected_variables());
    assert_eq!(sys.equality_count(), sizes.expected_equalities());
    assert_eq!(sys.bound_pair_count(), sizes.expected_variables());
    sys
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceVectorError {
    #[error("assignment is not a trace for the term (node {node})")]
    NotATrace { node: NodeId },
}

/// The 0/1 vector of a trace: its term labels, its states, and the one
/// transition taken per node.
pub fn trace_vector(
    a: &TShapedAutomaton,
    t: &Term,
    trace: &Trace,
) -> Result<RationalVector, TraceVectorError> {
    let mut entries = BTreeMap::new();
    for u in 0..a.node_count() {
        let ants: Vec<usize> =
            a.shape.children(u).iter().map(|&c| trace.states[c]).collect();
        let want = Transition {
            consequent: trace.states[u],
            antecedents: ants,
            symbol: t.labels[u],
        };
        let idx = a.transitions[u]
            .binary_search(&want)
            .map_err(|_| TraceVectorError::NotATrace { node: u })?;
        entries.insert(VarKey::Main(u, t.labels[u]), rat(1));
        entries.insert(VarKey::State(u, trace.states[u]), rat(1));
        entries.insert(VarKey::Trans(u, idx), rat(1));
    }
    Ok(RationalVector::from_entries(entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("vertex {0} has no designated node")]
    MissingVertex(VertexId),
    #[error("edge {0} has no designated node")]
    MissingEdge(EdgeId),
}

/// Element weights for linear optimization over the solution polytope.
#[derive(Debug, Clone, Default)]
pub struct Weights {
    pub vertices: BTreeMap<VertexId, Rat>,
    pub edges: BTreeMap<EdgeId, Rat>,
}

/// Places each element's weight on the main variables of its designated node
/// whose symbol selects the element, realizing linear optimization over the
/// solution polytope through the extension.
pub fn project_objective(
    index: &DesignatedIndex,
    a: &TShapedAutomaton,
    weights: &Weights,
) -> Result<BTreeMap<VarKey, Rat>, ObjectiveError> {
    let mut obj: BTreeMap<VarKey, Rat> = BTreeMap::new();
    let has_vertex_channel = a.alphabet.vertex_values > 0;
    for (&v, w) in &weights.vertices {
        let &node = index.nu.get(&v).ok_or(ObjectiveError::MissingVertex(v))?;
        for s in 0..a.alphabet.len() {
            if has_vertex_channel && a.alphabet.get(s)[0] > 0 {
                let e = obj.entry(VarKey::Main(node, s)).or_insert_with(|| rat(0));
                *e += w.clone();
            }
        }
    }
    for (&eid, w) in &weights.edges {
        let &node = index.eps.get(&eid).ok_or(ObjectiveError::MissingEdge(eid))?;
        let base = usize::from(has_vertex_channel);
        for s in 0..a.alphabet.len() {
            let sym = a.alphabet.get(s);
            if sym[base..].iter().any(|&b| b == 1) {
                let e = obj.entry(VarKey::Main(node, s)).or_insert_with(|| rat(0));
                *e += w.clone();
            }
        }
    }
    obj.retain(|_, w| !w.is_zero());
    Ok(obj)
}

/// Renders one linear expression. Returns the scaling factor applied when a
/// coefficient does not terminate in decimal (1 otherwise).
fn render_terms(coeffs: &[(VarKey, Rat)]) -> (String, num::BigInt) {
    use num::BigInt;
    let mut scale = BigInt::one();
    for (_, c) in coeffs {
        if to_terminating_decimal(c).is_none() {
            scale = num::integer::lcm(scale.clone(), c.denom().clone());
        }
    }
    let mut out = String::new();
    for (i, (k, c)) in coeffs.iter().enumerate() {
        let scaled = c.clone() * Rat::from_integer(scale.clone());
        let mag = scaled.abs();
        let neg = scaled.is_negative();
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if !mag.is_one() {
            out.push_str(&to_terminating_decimal(&mag).expect("scaled coefficient terminates"));
            out.push(' ');
        }
        out.push_str(&k.name());
    }
    (out, scale)
}

/// CPLEX-LP-format text with deterministic variable names. Rows whose
/// rationals do not terminate in decimal are emitted scaled to integers with
/// a declared denominator comment.
pub fn emit_lp(sys: &LinearSystem, objective: &BTreeMap<VarKey, Rat>, sense: Sense) -> String {
    let mut out = String::new();
    out.push_str(match sense {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    let obj_coeffs: Vec<(VarKey, Rat)> =
        objective.iter().map(|(k, v)| (*k, v.clone())).collect();
    let (terms, scale) = render_terms(&obj_coeffs);
    if !scale.is_one() {
        out.push_str(&format!("\\ obj scaled by {scale}\n"));
    }
    if terms.is_empty() {
        out.push_str(" obj: 0\n");
    } else {
        out.push_str(&format!(" obj: {terms}\n"));
    }
    out.push_str("Subject To\n");
    let mut family_counters: BTreeMap<u8, usize> = BTreeMap::new();
    for c in sys.equalities() {
        let fam = c.family.number();
        let idx = family_counters.entry(fam).or_insert(0);
        let name = format!("e{fam}_{idx}");
        *idx += 1;
        let mut row = c.coeffs.clone();
        // Fold the rhs into the scale computation by treating it as a term.
        let (terms, scale) = render_terms(&row);
        let rhs = c.rhs.clone() * Rat::from_integer(scale.clone());
        let rhs_str = match to_terminating_decimal(&rhs) {
            Some(s) => s,
            None => {
                // Rescale the whole row including rhs.
                let full_scale = num::integer::lcm(scale.clone(), c.rhs.denom().clone());
                row.iter_mut().for_each(|(_, v)| {
                    *v = v.clone() * Rat::from_integer(full_scale.clone())
                });
                let rhs = c.rhs.clone() * Rat::from_integer(full_scale.clone());
                out.push_str(&format!("\\ {name} scaled by {full_scale}\n"));
                let (terms, _) = render_terms(&row);
                out.push_str(&format!(
                    " {name}: {terms} {} {}\n",
                    c.relation.symbol(),
                    to_terminating_decimal(&rhs).expect("scaled rhs terminates")
                ));
                continue;
            }
        };
        if !scale.is_one() {
            out.push_str(&format!("\\ {name} scaled by {scale}\n"));
        }
        out.push_str(&format!(" {name}: {terms} {} {rhs_str}\n", c.relation.symbol()));
    }
    out.push_str("Bounds\n");
    for v in &sys.vars {
        out.push_str(&format!(" 0 <= {} <= 1\n", v.name()));
    }
    out.push_str("End\n");
    out
}

/// JSON-lines dump of the system: one object per constraint with its family
/// number, coefficients, relation, and right-hand side, in emission order.
/// Byte-deterministic; rationals are rendered as `p/q` strings.
pub fn emit_constraints_jsonl(sys: &LinearSystem) -> String {
    let rat_str = |r: &Rat| {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    };
    let mut out = String::new();
    for c in &sys.constraints {
        let coeffs: Vec<serde_json::Value> = c
            .coeffs
            .iter()
            .map(|(k, v)| serde_json::json!([k.name(), rat_str(v)]))
            .collect();
        let line = serde_json::json!({
            "family": c.family.number(),
            "coeffs": coeffs,
            "relation": c.relation.symbol(),
            "rhs": rat_str(&c.rhs),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpParseError {
    #[error("line {line}: unrecognized content: {text}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown variable name {name}")]
    UnknownVariable { line: usize, name: String },
    #[error("missing section: {0}")]
    MissingSection(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedLp {
    pub sense: Sense,
    pub objective: BTreeMap<VarKey, Rat>,
    pub system: LinearSystem,
}

/// Parses the LP dialect produced by [`emit_lp`], undoing row scaling
/// comments, and reconstructs an equal system.
pub fn parse_lp(text: &str) -> Result<ParsedLp, LpParseError> {
    #[derive(PartialEq)]
    enum Section {
        Start,
        Objective,
        SubjectTo,
        Bounds,
        Done,
    }
    let mut sense = None;
    let mut objective: BTreeMap<VarKey, Rat> = BTreeMap::new();
    let mut rows: Vec<(u8, Vec<(VarKey, Rat)>, Relation, Rat)> = Vec::new();
    let mut bound_vars: Vec<VarKey> = Vec::new();
    let mut section = Section::Start;
    let mut pending_scale: Option<(String, Rat)> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        let malformed = || LpParseError::Malformed { line, text: raw.to_string() };
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('\\') {
            let c = comment.trim();
            if let Some((what, scale)) = c.split_once(" scaled by ") {
                let s = parse_rat(scale.trim()).ok_or_else(malformed)?;
                pending_scale = Some((what.trim().to_string(), s));
            }
            continue;
        }
        match trimmed {
            "Maximize" => {
                sense = Some(Sense::Maximize);
                section = Section::Objective;
                continue;
            }
            "Minimize" => {
                sense = Some(Sense::Minimize);
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::SubjectTo;
                continue;
            }
            "Bounds" => {
                section = Section::Bounds;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Objective => {
                let body = trimmed.strip_prefix("obj:").ok_or_else(malformed)?.trim();
                let terms = parse_terms(body, line)?;
                let scale = match &pending_scale {
                    Some((what, s)) if what == "obj" => s.clone(),
                    _ => rat(1),
                };
                pending_scale = None;
                for (k, v) in terms {
                    if !v.is_zero() {
                        objective.insert(k, v / scale.clone());
                    }
                }
            }
            Section::SubjectTo => {
                let (name, body) = trimmed.split_once(':').ok_or_else(malformed)?;
                let name = name.trim();
                let fam: u8 = name
                    .strip_prefix('e')
                    .and_then(|s| s.split('_').next())
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                let (lhs, rel, rhs) = split_relation(body.trim()).ok_or_else(malformed)?;
                let terms = parse_terms(lhs, line)?;
                let rhs = parse_rat(rhs).ok_or_else(malformed)?;
                let scale = match &pending_scale {
                    Some((what, s)) if what == name => s.clone(),
                    _ => rat(1),
                };
                pending_scale = None;
                let coeffs: Vec<(VarKey, Rat)> = terms
                    .into_iter()
                    .map(|(k, v)| (k, v / scale.clone()))
                    .collect();
                rows.push((fam, coeffs, rel, rhs / scale));
            }
            Section::Bounds => {
                // " 0 <= name <= 1"
                let parts: Vec<&str> = trimmed.split_whitespace().collect();
                if parts.len() != 5 || parts[0] != "0" || parts[1] != "<=" || parts[3] != "<="
                    || parts[4] != "1"
                {
                    return Err(malformed());
                }
                let k = VarKey::parse_name(parts[2]).ok_or_else(|| {
                    LpParseError::UnknownVariable { line, name: parts[2].to_string() }
                })?;
                bound_vars.push(k);
            }
            Section::Start | Section::Done => return Err(malformed()),
        }
    }
    let sense = sense.ok_or(LpParseError::MissingSection("objective"))?;
    if bound_vars.is_empty() {
        return Err(LpParseError::MissingSection("Bounds"));
    }
    let vars = bound_vars;
    let mut constraints: Vec<Constraint> = Vec::new();
    for (fam, coeffs, relation, rhs) in rows {
        let family = Family::from_number(fam)
            .ok_or(LpParseError::MissingSection("constraint family"))?;
        constraints.push(Constraint { family, coeffs, relation, rhs });
    }
    // Reattach the bound rows exactly as build_system lays them out.
    for &v in &vars {
        constraints.push(Constraint {
            family: Family::Bounds,
            coeffs: vec![(v, rat(1))],
            relation: Relation::Ge,
            rhs: rat(0),
        });
        constraints.push(Constraint {
            family: Family::Bounds,
            coeffs: vec![(v, rat(1))],
            relation: Relation::Le,
            rhs: rat(1),
        });
    }
    let sizes = infer_sizes(&vars, &constraints);
    Ok(ParsedLp { sense, objective, system: LinearSystem { vars, constraints, sizes } })
}

fn infer_sizes(vars: &[VarKey], constraints: &[Constraint]) -> SystemSizes {
    let mut nodes = 0usize;
    let mut sigma = 0usize;
    let mut states = 0usize;
    let mut transitions = 0usize;
    for v in vars {
        match *v {
            VarKey::Main(u, s) => {
                nodes = nodes.max(u + 1);
                sigma = sigma.max(s + 1);
            }
            VarKey::State(..) => states += 1,
            VarKey::Trans(..) => transitions += 1,
        }
    }
    let root = nodes.saturating_sub(1);
    let root_states = vars
        .iter()
        .filter(|v| matches!(v, VarKey::State(u, _) if *u == root))
        .count();
    let finals = constraints
        .iter()
        .find(|c| c.family == Family::FinalRoot)
        .map(|c| c.coeffs.len())
        .unwrap_or(0);
    SystemSizes { nodes, sigma, states, root_states, finals, transitions }
}

fn split_relation(s: &str) -> Option<(&str, Relation, &str)> {
    for (pat, rel) in [("<=", Relation::Le), (">=", Relation::Ge), ("=", Relation::Eq)] {
        if let Some(pos) = s.find(pat) {
            return Some((s[..pos].trim(), rel, s[pos + pat.len()..].trim()));
        }
    }
    None
}

fn parse_terms(body: &str, line: usize) -> Result<Vec<(VarKey, Rat)>, LpParseError> {
    let mut out = Vec::new();
    if body.is_empty() || body == "0" {
        return Ok(out);
    }
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let mut i = 0;
    let mut sign = rat(1);
    let mut first = true;
    while i < tokens.len() {
        match tokens[i] {
            "+" => {
                sign = rat(1);
                i += 1;
            }
            "-" => {
                sign = rat(-1);
                i += 1;
            }
            tok => {
                if !first && tok != "+" && tok != "-" && sign.is_one() && i > 0 {
                    // Terms after the first must be joined by +/-; sign was
                    // consumed above when present.
                }
                let (coef, name) = if let Some(r) = parse_rat(tok) {
                    let name = tokens.get(i + 1).ok_or(LpParseError::Malformed {
                        line,
                        text: body.to_string(),
                    })?;
                    i += 2;
                    (r, *name)
                } else {
                    i += 1;
                    (rat(1), tok)
                };
                let key = VarKey::parse_name(name).ok_or(LpParseError::UnknownVariable {
                    line,
                    name: name.to_string(),
                })?;
                out.push((key, sign.clone() * coef));
                sign = rat(1);
                first = false;
            }
        }
    }
    Ok(out)
}
