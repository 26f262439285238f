//! Exact primal simplex over the rationals with Bland's anti-cycling rule.
//!
//! The system's state and main variables are defined by equalities from the
//! transition variables (incoming sums and symbol sums), so the solver first
//! substitutes them out and works on the pure transition-flow system:
//!
//!   one row forcing the final root states' incoming transitions to sum to 1,
//!   one conservation row per co-reachable non-root state, and z >= 0.
//!
//! Upper bounds are implied by the row structure and nonnegativity (each
//! group of variables sums to one per node), so they are not separate rows
//! here; they remain part of the emitted system and are checked by the
//! feasibility checker on every returned vertex.
//!
//! The initial basis picks, for every row, one incoming transition column:
//! the cost-minimal one found by backtracking over the table structure. That
//! basis is primal feasible (its basic solution is the backtracking-optimal
//! trace) and dual feasible (the backtracking values solve the dual), so the
//! simplex usually terminates in the first pricing pass with an exact
//! reduced-cost optimality certificate; from any other start (exercised in
//! tests through deliberately mis-crashed bases) the Bland pivoting loop
//! does the work. The backtracking optimum independently cross-checks the
//! returned value.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use thiserror::Error;

use crate::formulation::{Family, LinearSystem, RationalVector, Sense, VarKey};
use crate::rational::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("system is infeasible: no accepting trace")]
    Infeasible,
    #[error("objective references undeclared variable {0}")]
    UnknownVariable(String),
    #[error("internal solver error: {0}")]
    Internal(String),
}

/// The reduced pure-transition system extracted from a LinearSystem.
struct Reduced {
    /// Sorted alive transition variables; column ids are indices here.
    cols: Vec<VarKey>,
    /// Sparse column entries (row, coefficient), rows sorted ascending.
    col_entries: Vec<Vec<(usize, Rat)>>,
    /// Real cost per column (already folded from x/y objective terms).
    col_cost: Vec<Rat>,
    /// Number of rows: 1 (root) + alive non-root states.
    nrows: usize,
    /// For reconstruction: per state variable, its incoming transitions.
    state_incoming: BTreeMap<VarKey, Vec<VarKey>>,
    /// Per main variable, its same-symbol transitions.
    main_def: BTreeMap<VarKey, Vec<VarKey>>,
}

fn build_reduced(
    sys: &LinearSystem,
    objective: &BTreeMap<VarKey, Rat>,
) -> Result<Reduced, SolveError> {
    let var_index = sys.var_index();
    for k in objective.keys() {
        if !var_index.contains_key(k) {
            return Err(SolveError::UnknownVariable(k.name()));
        }
    }
    let mut finals: Vec<VarKey> = Vec::new();
    let mut state_incoming: BTreeMap<VarKey, Vec<VarKey>> = BTreeMap::new();
    let mut state_outgoing: BTreeMap<VarKey, Vec<VarKey>> = BTreeMap::new();
    let mut main_def: BTreeMap<VarKey, Vec<VarKey>> = BTreeMap::new();
    let mut trans_consequent: BTreeMap<VarKey, VarKey> = BTreeMap::new();
    let mut trans_antecedents: BTreeMap<VarKey, Vec<VarKey>> = BTreeMap::new();
    let mut trans_symbol_var: BTreeMap<VarKey, VarKey> = BTreeMap::new();
    for c in sys.equalities() {
        let states: Vec<VarKey> = c
            .coeffs
            .iter()
            .filter(|(k, _)| matches!(k, VarKey::State(..)))
            .map(|(k, _)| *k)
            .collect();
        let trans: Vec<VarKey> = c
            .coeffs
            .iter()
            .filter(|(k, _)| matches!(k, VarKey::Trans(..)))
            .map(|(k, _)| *k)
            .collect();
        let mains: Vec<VarKey> = c
            .coeffs
            .iter()
            .filter(|(k, _)| matches!(k, VarKey::Main(..)))
            .map(|(k, _)| *k)
            .collect();
        match c.family {
            Family::FinalRoot => finals = states,
            Family::NonFinalRoot => {}
            Family::Consequent => {
                let state = states[0];
                for t in &trans {
                    trans_consequent.insert(*t, state);
                }
                state_incoming.insert(state, trans);
            }
            Family::Antecedent => {
                let state = states[0];
                for t in &trans {
                    trans_antecedents.entry(*t).or_default().push(state);
                }
                state_outgoing.insert(state, trans);
            }
            Family::SymbolSum => {
                let main = mains[0];
                for t in &trans {
                    trans_symbol_var.insert(*t, main);
                }
                main_def.insert(main, trans);
            }
            Family::Bounds => {}
        }
    }

    // Co-reachability: walk nodes from the root down; a non-root state is
    // alive iff some parent transition with an alive consequent uses it.
    let nodes = sys.sizes.nodes;
    let root = nodes.saturating_sub(1);
    let mut states_by_node: Vec<Vec<VarKey>> = vec![Vec::new(); nodes];
    for k in &sys.vars {
        if let VarKey::State(u, _) = *k {
            states_by_node[u].push(*k);
        }
    }
    let mut alive_state: BTreeMap<VarKey, bool> = BTreeMap::new();
    let mut alive_trans: BTreeMap<VarKey, bool> = BTreeMap::new();
    for u in (0..nodes).rev() {
        for &s in &states_by_node[u] {
            let alive = if u == root {
                finals.contains(&s)
            } else {
                state_outgoing
                    .get(&s)
                    .map(|ts| ts.iter().any(|t| alive_trans.get(t).copied().unwrap_or(false)))
                    .unwrap_or(false)
            };
            alive_state.insert(s, alive);
            if alive {
                for t in state_incoming.get(&s).into_iter().flatten() {
                    alive_trans.insert(*t, true);
                }
            }
        }
    }

    let cols: Vec<VarKey> = sys
        .vars
        .iter()
        .filter(|k| matches!(k, VarKey::Trans(..)))
        .filter(|k| alive_trans.get(k).copied().unwrap_or(false))
        .copied()
        .collect();

    // Row layout: row 0 is the root final-sum row; remaining rows are alive
    // non-root states in variable order.
    let mut row_of_state: BTreeMap<VarKey, usize> = BTreeMap::new();
    let mut nrows = 1;
    for k in &sys.vars {
        if let VarKey::State(u, _) = *k {
            if u != root && alive_state[k] {
                row_of_state.insert(*k, nrows);
                nrows += 1;
            }
        }
    }

    let mut col_entries: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); cols.len()];
    let mut col_cost: Vec<Rat> = vec![rat(0); cols.len()];
    for (j, t) in cols.iter().enumerate() {
        let cons = trans_consequent[t];
        let mut entries: Vec<(usize, Rat)> = Vec::new();
        match cons {
            VarKey::State(u, _) if u == root => entries.push((0, rat(1))),
            _ => entries.push((row_of_state[&cons], rat(1))),
        }
        for s in trans_antecedents.get(t).into_iter().flatten() {
            entries.push((row_of_state[s], rat(-1)));
        }
        entries.sort_by_key(|&(r, _)| r);
        col_entries[j] = entries;
        let mut cost = objective.get(t).cloned().unwrap_or_else(|| rat(0));
        if let Some(w) = objective.get(&cons) {
            cost += w.clone();
        }
        if let Some(w) = objective.get(&trans_symbol_var[t]) {
            cost += w.clone();
        }
        col_cost[j] = cost;
    }

    if !finals.iter().any(|s| alive_state[s]) {
        return Err(SolveError::Infeasible);
    }

    Ok(Reduced {
        cols,
        col_entries,
        col_cost,
        nrows,
        state_incoming,
        main_def,
    })
}

/// Backtracking pass over the reduced structure: per row, the cost-minimal
/// incoming column and its subtree value; picking the per-row best column as
/// the basis yields a primal- and dual-feasible start, and the root value is
/// the independent optimum cross-check. With `worst`, picks the cost-maximal
/// incoming column per row instead: still a feasible basis, generally not
/// optimal (used to exercise the pivoting loop).
fn backtracking_basis(red: &Reduced, minimize: &[Rat], worst: bool) -> Option<(Rat, Vec<usize>)> {
    // Columns are sorted by (node, index) and antecedent rows always belong
    // to smaller nodes, so one pass in column order sees finished antecedent
    // values.
    let mut best: Vec<Option<(Rat, usize)>> = vec![None; red.nrows];
    for (j, entries) in red.col_entries.iter().enumerate() {
        let mut total = minimize[j].clone();
        let mut ok = true;
        let mut cons_row = None;
        for (r, v) in entries {
            if v.is_negative() {
                match &best[*r] {
                    Some((b, _)) => total += b.clone(),
                    None => {
                        ok = false;
                        break;
                    }
                }
            } else {
                cons_row = Some(*r);
            }
        }
        if !ok {
            continue;
        }
        let cons_row = cons_row.expect("column has a consequent row");
        let slot = &mut best[cons_row];
        let replace = match slot {
            None => true,
            Some((b, _)) => {
                if worst {
                    total > *b
                } else {
                    total < *b
                }
            }
        };
        if replace {
            *slot = Some((total, j));
        }
    }
    let (value, _) = best[0].clone()?;
    let basis: Vec<usize> = best
        .into_iter()
        .map(|slot| slot.expect("every alive state has an incoming column").1)
        .collect();
    Some((value, basis))
}

/// Sparse exact LU factorization with row pivoting (fewest-nonzeros row,
/// lowest index on ties).
struct Lu {
    /// pivots[k]: the row eliminated with column position k.
    pivots: Vec<usize>,
    /// lops[k]: (row, factor) pairs applied as row -= factor * pivot_row.
    lops: Vec<Vec<(usize, Rat)>>,
    /// urows[k]: the pivot row after elimination, entries (colpos >= k).
    urows: Vec<Vec<(usize, Rat)>>,
    /// ucols[k]: transpose view, entries (colpos <= k).
    ucols: Vec<Vec<(usize, Rat)>>,
}

impl Lu {
    fn factor(nrows: usize, basis_cols: &[Vec<(usize, Rat)>]) -> Result<Lu, SolveError> {
        assert_eq!(nrows, basis_cols.len());
        let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); nrows];
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); nrows];
        for (j, col) in basis_cols.iter().enumerate() {
            for (r, v) in col {
                rows[*r].insert(j, v.clone());
                col_rows[j].push(*r);
            }
        }
        let mut free = vec![true; nrows];
        let mut pivots = Vec::with_capacity(nrows);
        let mut lops = Vec::with_capacity(nrows);
        for k in 0..nrows {
            let p = col_rows[k]
                .iter()
                .copied()
                .filter(|&r| free[r] && rows[r].get(&k).map(|v| !v.is_zero()).unwrap_or(false))
                .min_by_key(|&r| (rows[r].len(), r))
                .ok_or_else(|| SolveError::Internal("singular basis".to_string()))?;
            free[p] = false;
            pivots.push(p);
            let pivot_row: Vec<(usize, Rat)> =
                rows[p].range(k..).map(|(&j, v)| (j, v.clone())).collect();
            let pv = pivot_row[0].1.clone();
            debug_assert_eq!(pivot_row[0].0, k);
            let holders: Vec<usize> = col_rows[k]
                .iter()
                .copied()
                .filter(|&r| free[r] && rows[r].contains_key(&k))
                .collect();
            let mut mults = Vec::new();
            for i in holders {
                let f = rows[i].remove(&k).unwrap() / pv.clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in pivot_row.iter().skip(1) {
                    let entry = rows[i].entry(*j).or_insert_with(|| rat(0));
                    *entry -= f.clone() * v.clone();
                    if entry.is_zero() {
                        rows[i].remove(j);
                    } else if !col_rows[*j].contains(&i) {
                        col_rows[*j].push(i);
                    }
                }
                mults.push((i, f));
            }
            lops.push(mults);
        }
        let mut urows: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(nrows);
        let mut ucols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); nrows];
        for k in 0..nrows {
            let row: Vec<(usize, Rat)> =
                rows[pivots[k]].range(k..).map(|(&j, v)| (j, v.clone())).collect();
            for (j, v) in &row {
                ucols[*j].push((k, v.clone()));
            }
            urows.push(row);
        }
        Ok(Lu { pivots, lops, urows, ucols })
    }

    /// Solves B x = b; b is sparse (row, value), x is dense by position.
    fn ftran(&self, nrows: usize, b: &[(usize, Rat)]) -> Vec<Rat> {
        let mut y = vec![rat(0); nrows];
        for (r, v) in b {
            y[*r] = v.clone();
        }
        for (k, mults) in self.lops.iter().enumerate() {
            if y[self.pivots[k]].is_zero() {
                continue;
            }
            let pv = y[self.pivots[k]].clone();
            for (i, f) in mults {
                y[*i] -= f.clone() * pv.clone();
            }
        }
        let mut x = vec![rat(0); nrows];
        for k in (0..nrows).rev() {
            let mut s = y[self.pivots[k]].clone();
            for (j, v) in self.urows[k].iter().skip(1) {
                if !x[*j].is_zero() {
                    s -= v.clone() * x[*j].clone();
                }
            }
            if !s.is_zero() {
                x[k] = s / self.urows[k][0].1.clone();
            }
        }
        x
    }

    /// Solves B^T pi = c; c is dense by position, pi is dense by row.
    fn btran(&self, nrows: usize, c: &[Rat]) -> Vec<Rat> {
        let mut w = vec![rat(0); nrows];
        for k in 0..nrows {
            let mut s = c[k].clone();
            let mut diag = None;
            for (j, v) in &self.ucols[k] {
                if *j < k {
                    if !w[*j].is_zero() {
                        s -= v.clone() * w[*j].clone();
                    }
                } else {
                    diag = Some(v.clone());
                }
            }
            if !s.is_zero() {
                w[k] = s / diag.expect("diagonal entry");
            } else if diag.is_none() {
                panic!("missing diagonal entry in U");
            }
        }
        let mut t = vec![rat(0); nrows];
        for k in 0..nrows {
            t[self.pivots[k]] = w[k].clone();
        }
        for k in (0..self.lops.len()).rev() {
            let mut acc = t[self.pivots[k]].clone();
            for (i, f) in &self.lops[k] {
                if !t[*i].is_zero() {
                    acc -= f.clone() * t[*i].clone();
                }
            }
            t[self.pivots[k]] = acc;
        }
        t
    }
}

struct Simplex<'a> {
    red: &'a Reduced,
    minimize: &'a [Rat],
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    x_b: Vec<Rat>,
    lu: Lu,
    /// PFI etas: (leaving position, direction d = B^-1 a_entering).
    etas: Vec<(usize, Vec<Rat>)>,
    pivots_taken: usize,
}

impl<'a> Simplex<'a> {
    fn refactor(&mut self) -> Result<(), SolveError> {
        let cols: Vec<Vec<(usize, Rat)>> = self
            .basis
            .iter()
            .map(|&id| self.red.col_entries[id].clone())
            .collect();
        self.lu = Lu::factor(self.red.nrows, &cols)?;
        self.etas.clear();
        Ok(())
    }

    fn ftran(&self, b: &[(usize, Rat)]) -> Vec<Rat> {
        let mut x = self.lu.ftran(self.red.nrows, b);
        for (r, d) in &self.etas {
            let t = x[*r].clone() / d[*r].clone();
            for (i, di) in d.iter().enumerate() {
                if i != *r && !di.is_zero() && !t.is_zero() {
                    x[i] -= di.clone() * t.clone();
                }
            }
            x[*r] = t;
        }
        x
    }

    fn btran(&self, c: &[Rat]) -> Vec<Rat> {
        let mut c = c.to_vec();
        for (r, d) in self.etas.iter().rev() {
            let mut s = c[*r].clone();
            for (i, di) in d.iter().enumerate() {
                if i != *r && !di.is_zero() && !c[i].is_zero() {
                    s -= di.clone() * c[i].clone();
                }
            }
            c[*r] = s / d[*r].clone();
        }
        self.lu.btran(self.red.nrows, &c)
    }

    fn run(&mut self) -> Result<(), SolveError> {
        loop {
            let c_b: Vec<Rat> =
                self.basis.iter().map(|&id| self.minimize[id].clone()).collect();
            let pi = self.btran(&c_b);
            // Bland: lowest-id nonbasic column with negative reduced cost.
            let mut entering = None;
            for j in 0..self.red.cols.len() {
                if self.in_basis[j] {
                    continue;
                }
                let mut rc = self.minimize[j].clone();
                for (r, v) in &self.red.col_entries[j] {
                    if !pi[*r].is_zero() {
                        rc -= v.clone() * pi[*r].clone();
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };
            let d = self.ftran(&self.red.col_entries[q]);
            // Ratio test with Bland's tie-break: lowest basis variable id.
            let mut best: Option<(Rat, usize)> = None;
            for (i, di) in d.iter().enumerate() {
                if di.is_positive() {
                    let theta = self.x_b[i].clone() / di.clone();
                    let better = match &best {
                        None => true,
                        Some((t, r)) => {
                            theta < *t || (theta == *t && self.basis[i] < self.basis[*r])
                        }
                    };
                    if better {
                        best = Some((theta, i));
                    }
                }
            }
            let Some((theta, r)) = best else {
                return Err(SolveError::Internal(
                    "unbounded direction in a bounded polytope".to_string(),
                ));
            };
            for (i, di) in d.iter().enumerate() {
                if i != r && !di.is_zero() && !theta.is_zero() {
                    self.x_b[i] -= di.clone() * theta.clone();
                }
            }
            self.x_b[r] = theta;
            self.in_basis[q] = true;
            self.in_basis[self.basis[r]] = false;
            self.basis[r] = q;
            self.etas.push((r, d));
            self.pivots_taken += 1;
            if self.etas.len() > 64.max(self.red.nrows / 8) {
                self.refactor()?;
            }
        }
    }
}

/// Exact optimization over the system: returns the optimal value and an
/// optimal basic feasible solution, lifted back to the full variable space.
/// The returned vertex is 0/1 on these systems (a property the verification
/// suite asserts rather than assumes).
pub fn optimize(
    sys: &LinearSystem,
    objective: &BTreeMap<VarKey, Rat>,
    sense: Sense,
) -> Result<(Rat, RationalVector), SolveError> {
    optimize_inner(sys, objective, sense, false).map(|(v, x, _)| (v, x))
}

/// As [`optimize`] but reports the pivot count and optionally starts from a
/// deliberately suboptimal basis, for tests of the pivoting machinery.
pub fn optimize_with_stats(
    sys: &LinearSystem,
    objective: &BTreeMap<VarKey, Rat>,
    sense: Sense,
    worst_start: bool,
) -> Result<(Rat, RationalVector, usize), SolveError> {
    optimize_inner(sys, objective, sense, worst_start)
}

fn optimize_inner(
    sys: &LinearSystem,
    objective: &BTreeMap<VarKey, Rat>,
    sense: Sense,
    worst_start: bool,
) -> Result<(Rat, RationalVector, usize), SolveError> {
    let red = build_reduced(sys, objective)?;
    let ncols = red.cols.len();
    let minimize: Vec<Rat> = match sense {
        Sense::Minimize => red.col_cost.clone(),
        Sense::Maximize => red.col_cost.iter().map(|c| -c.clone()).collect(),
    };
    let (dp_min, basis) = backtracking_basis(&red, &minimize, worst_start)
        .ok_or_else(|| SolveError::Internal("no trace found by value backtracking".into()))?;
    let dp_min = if worst_start {
        // The worst-start basis value is not the optimum; recompute it.
        backtracking_basis(&red, &minimize, false)
            .expect("optimum exists when any basis does")
            .0
    } else {
        dp_min
    };

    let mut in_basis = vec![false; ncols];
    for &id in &basis {
        in_basis[id] = true;
    }
    let mut spx = Simplex {
        red: &red,
        minimize: &minimize,
        basis,
        in_basis,
        x_b: vec![rat(0); red.nrows],
        lu: Lu { pivots: vec![], lops: vec![], urows: vec![], ucols: vec![] },
        etas: Vec::new(),
        pivots_taken: 0,
    };
    spx.refactor()?;
    spx.x_b = spx.ftran(&[(0, rat(1))]);
    if spx.x_b.iter().any(|v| v.is_negative()) {
        return Err(SolveError::Internal("crash basis is not feasible".to_string()));
    }
    spx.run()?;

    // Lift back: z from the basis, then y and x from their defining sums.
    let mut z_value: BTreeMap<VarKey, Rat> = BTreeMap::new();
    for (i, &id) in spx.basis.iter().enumerate() {
        if !spx.x_b[i].is_zero() {
            z_value.insert(red.cols[id], spx.x_b[i].clone());
        }
    }
    let mut entries: BTreeMap<VarKey, Rat> = z_value.clone();
    for (state, incoming) in &red.state_incoming {
        let mut sum = rat(0);
        for t in incoming {
            if let Some(v) = z_value.get(t) {
                sum += v.clone();
            }
        }
        if !sum.is_zero() {
            entries.insert(*state, sum);
        }
    }
    for (main, trans) in &red.main_def {
        let mut sum = rat(0);
        for t in trans {
            if let Some(v) = z_value.get(t) {
                sum += v.clone();
            }
        }
        if !sum.is_zero() {
            entries.insert(*main, sum);
        }
    }
    let vertex = RationalVector::from_entries(entries);
    let mut value = rat(0);
    for (k, w) in objective {
        let v = vertex.get(k);
        if !v.is_zero() {
            value += w.clone() * v;
        }
    }

    // Cross-check the optimum against the backtracking optimum.
    let dp_value = match sense {
        Sense::Minimize => dp_min,
        Sense::Maximize => -dp_min,
    };
    if dp_value != value {
        return Err(SolveError::Internal(format!(
            "simplex optimum {value} disagrees with backtracking optimum {dp_value}"
        )));
    }
    Ok((value, vertex, spx.pivots_taken))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::build_automaton;
    use crate::cores::{run_tables, CutCore, DominatingSetCore, IndependentSetCore};
    use crate::decomposition::{build_heuristic_td, designated_index, make_nice};
    use crate::formulation::{build_system, project_objective, Weights};
    use crate::graph::Graph;
    use crate::rational::rat_frac;
    use crate::verify::{check_feasible, integral_to_trace};

    fn unit_vertex_weights(g: &Graph) -> Weights {
        Weights {
            vertices: g.vertices().map(|v| (v, rat(1))).collect(),
            edges: BTreeMap::new(),
        }
    }

    fn unit_edge_weights(g: &Graph) -> Weights {
        Weights {
            vertices: BTreeMap::new(),
            edges: g.edge_ids().map(|e| (e, rat(1))).collect(),
        }
    }

    #[test]
    fn max_is_p3_is_two() {
        let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let obj = project_objective(&index, &a, &unit_vertex_weights(&g)).unwrap();
        let (value, vertex) = optimize(&sys, &obj, Sense::Maximize).unwrap();
        assert_eq!(value, rat(2));
        assert!(vertex.is_zero_one());
        assert!(check_feasible(&sys, &vertex).is_empty());
        // Decodes to X = {1,3}.
        let (term, _) = integral_to_trace(&a, &sys, &vertex).unwrap();
        assert_eq!(term.labels[index.nu[&1]], 1);
        assert_eq!(term.labels[index.nu[&2]], 0);
        assert_eq!(term.labels[index.nu[&3]], 1);
    }

    #[test]
    fn max_is_k2_is_one() {
        let g = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let obj = project_objective(&index, &a, &unit_vertex_weights(&g)).unwrap();
        let (value, vertex) = optimize(&sys, &obj, Sense::Maximize).unwrap();
        assert_eq!(value, rat(1));
        assert!(vertex.is_zero_one());
    }

    #[test]
    fn zero_objective_returns_feasible_vertex() {
        let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let core = IndependentSetCore { ell: 1 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let (value, vertex) = optimize(&sys, &BTreeMap::new(), Sense::Minimize).unwrap();
        assert_eq!(value, rat(0));
        assert!(vertex.is_zero_one());
        assert!(check_feasible(&sys, &vertex).is_empty());
    }

    #[test]
    fn infeasible_when_no_accepting_trace() {
        let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let core = IndependentSetCore { ell: 3 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        assert_eq!(
            optimize(&sys, &BTreeMap::new(), Sense::Minimize),
            Err(SolveError::Infeasible)
        );
    }

    #[test]
    fn min_ds_on_star_is_one() {
        // Star K(1,3): center 1 dominates everything.
        let g = Graph::parse("p 4 3\ne 1 2\ne 1 3\ne 1 4\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = DominatingSetCore { ell: 4, uncorrected: false };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let obj = project_objective(&index, &a, &unit_vertex_weights(&g)).unwrap();
        let (value, vertex) = optimize(&sys, &obj, Sense::Minimize).unwrap();
        assert_eq!(value, rat(1));
        assert!(vertex.is_zero_one());
    }

    #[test]
    fn max_cut_c4_is_four() {
        let g = Graph::parse("p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = CutCore::new(0, &g);
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let obj = project_objective(&index, &a, &unit_edge_weights(&g)).unwrap();
        let (value, vertex) = optimize(&sys, &obj, Sense::Maximize).unwrap();
        assert_eq!(value, rat(4)); // alternate sides around the cycle
        assert!(vertex.is_zero_one());
    }

    #[test]
    fn fractional_objective_still_lands_on_vertex() {
        let g = Graph::parse("p 3 2\ne 1 2\ne 2 3\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let weights = Weights {
            vertices: [(1, rat_frac(1, 3)), (2, rat_frac(5, 2)), (3, rat_frac(-7, 4))]
                .into_iter()
                .collect(),
            edges: BTreeMap::new(),
        };
        let obj = project_objective(&index, &a, &weights).unwrap();
        let (value, vertex) = optimize(&sys, &obj, Sense::Maximize).unwrap();
        assert_eq!(value, rat_frac(5, 2)); // take vertex 2 alone
        assert!(vertex.is_zero_one());
        assert!(check_feasible(&sys, &vertex).is_empty());
    }

    /// The pivoting loop itself, exercised by starting from the worst
    /// backtracking basis: Bland's rule must walk to the same optimum.
    #[test]
    fn pivots_from_suboptimal_start_reach_optimum() {
        let g = Graph::parse("p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n").unwrap();
        let nd = make_nice(&g, &build_heuristic_td(&g)).unwrap();
        let index = designated_index(&nd).unwrap();
        let core = IndependentSetCore { ell: 0 };
        let tables = run_tables(&core, &nd);
        let a = build_automaton(&core, &nd, &tables);
        let sys = build_system(&a);
        let obj = project_objective(&index, &a, &unit_vertex_weights(&g)).unwrap();
        let (v_best, x_best, p_best) =
            optimize_with_stats(&sys, &obj, Sense::Maximize, false).unwrap();
        let (v_worst, x_worst, p_worst) =
            optimize_with_stats(&sys, &obj, Sense::Maximize, true).unwrap();
        assert_eq!(v_best, rat(2));
        assert_eq!(v_worst, rat(2));
        assert_eq!(p_best, 0, "tight crash basis certifies without pivoting");
        assert!(p_worst > 0, "suboptimal start must pivot");
        assert!(x_best.is_zero_one() && x_worst.is_zero_one());
        assert!(check_feasible(&sys, &x_worst).is_empty());
    }
}
