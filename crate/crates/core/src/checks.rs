//! Per-instance verification checks. Each check mirrors one clause of the
//! suite's acceptance gate and produces machine-readable reports; the
//! cross-validate command and the acceptance test target both run these.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::automaton::{
    accepts_term, build_automaton, characteristic_tree, designation_label,
    enumerate_language_by_root_state, is_accepting_trace, AutomatonError, Term, Trace,
    TShapedAutomaton,
};
use crate::cores::{core_for, enumerate_witness_trees, run_tables, DpCore, Tables};
use crate::decomposition::{
    build_heuristic_td, designated_index, make_nice, validate_nice, DesignatedIndex,
    NiceDecomposition,
};
use crate::formulation::{
    build_system, emit_lp, parse_lp, project_objective, trace_vector, LinearSystem,
    RationalVector, Sense, VarKey, Weights,
};
use crate::graph::{
    brute_force_solutions, Graph, ProblemKind, ProblemSpec, SolutionTuple,
    DEFAULT_ORACLE_BUDGET,
};
use crate::rational::{rat, Rat};
use crate::simplex::optimize;
use crate::verify::{
    all_node_sums_are_one, check_feasible, decompose, integral_to_trace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Partial,
    /// Mutation checks: the broken variant was caught / not exercised here.
    Detected,
    NotDetected,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub anchor: &'static str,
    pub instance: String,
    pub config: String,
    pub status: Status,
    pub seed: u64,
    pub details: Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Detected | Status::NotDetected)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub seed: u64,
    pub oracle_budget: u64,
    pub witness_limit: usize,
    pub language_limit: usize,
    pub random_objectives: usize,
    pub random_traces: usize,
    pub random_combinations: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0x7d17,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
            witness_limit: 500_000,
            language_limit: 500_000,
            random_objectives: 20,
            random_traces: 100,
            random_combinations: 100,
        }
    }
}

/// A graph with its decomposition and designated-node index, ready to check.
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub nd: NiceDecomposition,
    pub index: DesignatedIndex,
}

impl Instance {
    pub fn prepare(name: impl Into<String>, graph: Graph) -> Instance {
        let raw = build_heuristic_td(&graph);
        let nd = make_nice(&graph, &raw).expect("heuristic raw decomposition is valid");
        Instance::with_decomposition(name, graph, nd)
    }

    pub fn with_decomposition(
        name: impl Into<String>,
        graph: Graph,
        nd: NiceDecomposition,
    ) -> Instance {
        let report = validate_nice(&graph, &nd);
        assert!(report.is_valid(), "invalid decomposition: {:?}", report.violations);
        let index = designated_index(&nd).expect("valid decompositions designate all vertices");
        Instance { name: name.into(), graph, nd, index }
    }
}

/// One table run shared by every threshold variant of a core family.
struct FamilyRun {
    base_spec: ProblemSpec,
    core: Box<dyn DpCore>,
    tables: Tables,
    automaton: TShapedAutomaton,
    /// Full oracle at the base (most permissive) threshold.
    oracle: BTreeSet<SolutionTuple>,
}

/// The per-family specs of the language-equality matrix, keyed by the base
/// spec whose tables the variants share.
fn family_matrix(g: &Graph) -> Vec<(ProblemSpec, Vec<ProblemSpec>)> {
    let n = g.n() as u32;
    let mut out = Vec::new();
    out.push((
        ProblemSpec::independent_set(0),
        (0..=2).map(ProblemSpec::independent_set).collect(),
    ));
    out.push((
        ProblemSpec::dominating_set(n),
        (1..=n.max(1)).map(ProblemSpec::dominating_set).collect(),
    ));
    out.push((ProblemSpec::cut(0), vec![ProblemSpec::cut(1), ProblemSpec::cut(2)]));
    out.push((ProblemSpec::hamiltonian_cycle(), vec![ProblemSpec::hamiltonian_cycle()]));
    out.push((ProblemSpec::coloring(2), vec![ProblemSpec::coloring(2)]));
    out.push((ProblemSpec::coloring(3), vec![ProblemSpec::coloring(3)]));
    out
}

fn run_family(inst: &Instance, base: ProblemSpec, cfg: &CheckConfig) -> FamilyRun {
    let core = core_for(&base, &inst.graph, false);
    let tables = run_tables(core.as_ref(), &inst.nd);
    let automaton = build_automaton(core.as_ref(), &inst.nd, &tables);
    let oracle = brute_force_solutions(&inst.graph, &base, cfg.oracle_budget)
        .expect("corpus instances fit the oracle budget");
    FamilyRun { base_spec: base, core, tables, automaton, oracle }
}

/// Restricts a base-threshold oracle to a tighter threshold.
fn filter_oracle(
    oracle: &BTreeSet<SolutionTuple>,
    spec: &ProblemSpec,
) -> BTreeSet<SolutionTuple> {
    oracle
        .iter()
        .filter(|x| match spec.kind {
            ProblemKind::IndependentSet => x.vertex_sets[0].len() as u32 >= spec.ell,
            ProblemKind::DominatingSet => x.vertex_sets[0].len() as u32 <= spec.ell,
            ProblemKind::Cut => x.edge_sets[0].len() as u32 >= spec.ell,
            ProblemKind::HamiltonianCycle | ProblemKind::DColoring => true,
        })
        .cloned()
        .collect()
}

/// The per-root-state language through witness-tree backtracking. For
/// automata built by `build_automaton` every transition's symbol is a
/// function of its consequent witness, so accepting traces are exactly the
/// witness trees and each tree's term is its per-node designation label.
/// Memory stays linear in the number of witness trees, where the bottom-up
/// fragment enumeration can blow up on intermediate counts (dense
/// Hamiltonian-cycle instances).
fn language_by_root_state_via_witness_trees(
    inst: &Instance,
    run: &FamilyRun,
    limit: usize,
) -> Option<Vec<BTreeSet<Term>>> {
    let (trees, overflow) =
        enumerate_witness_trees(run.core.as_ref(), &inst.nd, &run.tables, limit);
    if overflow.is_some() {
        return None;
    }
    let root = inst.nd.root();
    let mut out: Vec<BTreeSet<Term>> = vec![BTreeSet::new(); run.tables.gamma[root].len()];
    for wt in &trees {
        let q = run.tables.gamma[root]
            .binary_search(&wt.assignment[root])
            .expect("root witness is in the root table");
        let labels: Vec<usize> = (0..inst.nd.len())
            .map(|u| {
                designation_label(
                    run.core.as_ref(),
                    &inst.nd,
                    &run.automaton.alphabet,
                    u,
                    &wt.assignment[u],
                )
            })
            .collect();
        out[q].insert(Term { labels });
    }
    Some(out)
}

/// Language equality: the automaton's language equals the characteristic
/// trees of the oracle's solutions, exactly, for every threshold variant.
/// Also records the width identity and the analytic table ceilings.
pub fn check_language_equality(inst: &Instance, cfg: &CheckConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for (base, variants) in family_matrix(&inst.graph) {
        let run = run_family(inst, base, cfg);
        let mut via = "fragments";
        let by_state = match enumerate_language_by_root_state(&run.automaton, cfg.language_limit)
        {
            Ok(sets) => sets,
            Err(AutomatonError::Overflow { limit }) => {
                // Fall back to the witness-tree route, which computes the
                // same sets without materializing intermediate fragments.
                via = "witness-trees";
                match language_by_root_state_via_witness_trees(inst, &run, cfg.witness_limit) {
                    Some(sets) => sets,
                    None => {
                        out.push(CheckReport {
                            check: "language-equality",
                            anchor: "language",
                            instance: inst.name.clone(),
                            config: run.core.name(),
                            status: Status::Partial,
                            seed: cfg.seed,
                            details: json!({ "overflow_limit": limit }),
                        });
                        continue;
                    }
                }
            }
            Err(e) => panic!("unexpected enumeration error: {e}"),
        };
        let root = run.automaton.root();
        for spec in variants {
            let variant_core = core_for(&spec, &inst.graph, false);
            let mut lang: BTreeSet<Term> = BTreeSet::new();
            for (q, w) in run.tables.gamma[root].iter().enumerate() {
                if variant_core.is_final(w) {
                    lang.extend(by_state[q].iter().cloned());
                }
            }
            let sols = filter_oracle(&run.oracle, &spec);
            let expected: BTreeSet<Term> = sols
                .iter()
                .map(|x| {
                    characteristic_tree(&inst.nd, &inst.index, &run.automaton.alphabet, x)
                        .expect("solutions have designated nodes")
                })
                .collect();
            let equal = lang == expected;
            out.push(CheckReport {
                check: "language-equality",
                anchor: "language",
                instance: inst.name.clone(),
                config: variant_core.name(),
                status: if equal { Status::Pass } else { Status::Fail },
                seed: cfg.seed,
                details: if equal {
                    json!({ "terms": lang.len(), "solutions": sols.len(), "via": via })
                } else {
                    json!({
                        "language_size": lang.len(),
                        "expected_size": expected.len(),
                        "missing": expected.difference(&lang).count(),
                        "extra": lang.difference(&expected).count(),
                        "via": via,
                    })
                },
            });
        }
        // Width identity and analytic ceiling for this family's table run.
        let width_ok = run.automaton.width() == run.tables.max_table_size;
        let k = inst.nd.width();
        let ceiling = run.core.table_ceiling(k, inst.graph.n(), inst.graph.m());
        let ceiling_ok = ceiling
            .map(|c| run.tables.max_table_size as u128 <= c)
            .unwrap_or(true);
        out.push(CheckReport {
            check: "table-sizes",
            anchor: "table-complexity",
            instance: inst.name.clone(),
            config: run.core.name(),
            status: if width_ok && ceiling_ok { Status::Pass } else { Status::Fail },
            seed: cfg.seed,
            details: json!({
                "max_table_size": run.tables.max_table_size,
                "automaton_width": run.automaton.width(),
                "ceiling": ceiling.map(|c| c.to_string()),
                "width": k,
            }),
        });
        let _ = run.base_spec;
    }
    out
}

/// The three optimization systems of an instance: independent set
/// (maximize), dominating set (minimize), cut (maximize).
pub struct PreparedSystem {
    pub spec: ProblemSpec,
    pub sense: Sense,
    pub core: Box<dyn DpCore>,
    pub tables: Tables,
    pub automaton: TShapedAutomaton,
    pub system: LinearSystem,
    pub oracle_optimum: Rat,
    pub unit_weights: Weights,
}

pub fn optimization_systems(inst: &Instance, cfg: &CheckConfig) -> Vec<PreparedSystem> {
    let n = inst.graph.n() as u32;
    let mut out = Vec::new();
    for (spec, sense) in [
        (ProblemSpec::independent_set(0), Sense::Maximize),
        (ProblemSpec::dominating_set(n), Sense::Minimize),
        (ProblemSpec::cut(0), Sense::Maximize),
    ] {
        let core = core_for(&spec, &inst.graph, false);
        let tables = run_tables(core.as_ref(), &inst.nd);
        let automaton = build_automaton(core.as_ref(), &inst.nd, &tables);
        let system = build_system(&automaton);
        let oracle = brute_force_solutions(&inst.graph, &spec, cfg.oracle_budget)
            .expect("corpus instances fit the oracle budget");
        let size = |x: &SolutionTuple| -> u32 {
            x.vertex_sets.iter().map(|s| s.len() as u32).sum::<u32>()
                + x.edge_sets.iter().map(|s| s.len() as u32).sum::<u32>()
        };
        let opt = match sense {
            Sense::Maximize => oracle.iter().map(|x| size(x)).max(),
            Sense::Minimize => oracle.iter().map(|x| size(x)).min(),
        }
        .expect("these solution sets are never empty");
        let unit_weights = match spec.kind {
            ProblemKind::Cut => Weights {
                vertices: BTreeMap::new(),
                edges: inst.graph.edge_ids().map(|e| (e, rat(1))).collect(),
            },
            _ => Weights {
                vertices: inst.graph.vertices().map(|v| (v, rat(1))).collect(),
                edges: BTreeMap::new(),
            },
        };
        out.push(PreparedSystem {
            spec,
            sense,
            core,
            tables,
            automaton,
            system,
            oracle_optimum: rat(opt as i64),
            unit_weights,
        });
    }
    out
}

fn random_objective(sys: &LinearSystem, rng: &mut ChaCha8Rng) -> BTreeMap<VarKey, Rat> {
    let mut obj = BTreeMap::new();
    for &k in &sys.vars {
        let num: i64 = rng.random_range(-9..=9);
        let den: i64 = rng.random_range(1..=4);
        if num != 0 {
            obj.insert(k, Rat::new(num.into(), den.into()));
        }
    }
    obj
}

/// Integrality and LP optimum: random rational objectives and the projected
/// unit objective both land on 0/1 vertices; the unit objective's optimum
/// equals the combinatorial optimum exactly.
pub fn check_integrality_and_optimum(
    inst: &Instance,
    systems: &[PreparedSystem],
    cfg: &CheckConfig,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for ps in systems {
        let mut rng = seeded_rng(cfg.seed, &inst.name, &ps.core.name(), "objectives");
        let mut integral_ok = true;
        let mut feasible_ok = true;
        let mut decode_ok = true;
        for _ in 0..cfg.random_objectives {
            let obj = random_objective(&ps.system, &mut rng);
            let sense = if rng.random_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
            let (_, vertex) = optimize(&ps.system, &obj, sense)
                .expect("these systems are feasible");
            integral_ok &= vertex.is_zero_one();
            feasible_ok &= check_feasible(&ps.system, &vertex).is_empty();
            let decoded = integral_to_trace(&ps.automaton, &ps.system, &vertex);
            decode_ok &= match decoded {
                Ok((term, _)) => {
                    matches!(accepts_term(&ps.automaton, &term), Ok(Some(_)))
                }
                Err(_) => false,
            };
        }
        out.push(CheckReport {
            check: "integrality",
            anchor: "vertex-integrality",
            instance: inst.name.clone(),
            config: ps.core.name(),
            status: if integral_ok && feasible_ok && decode_ok {
                Status::Pass
            } else {
                Status::Fail
            },
            seed: cfg.seed,
            details: json!({
                "objectives": cfg.random_objectives,
                "integral": integral_ok,
                "feasible": feasible_ok,
                "decodes_to_accepting_trace": decode_ok,
            }),
        });

        let obj = project_objective(&inst.index, &ps.automaton, &ps.unit_weights)
            .expect("unit weights cover designated elements");
        let (value, vertex) = optimize(&ps.system, &obj, ps.sense)
            .expect("these systems are feasible");
        let matches = value == ps.oracle_optimum && vertex.is_zero_one();
        out.push(CheckReport {
            check: "lp-vs-combinatorial-optimum",
            anchor: "projection",
            instance: inst.name.clone(),
            config: ps.core.name(),
            status: if matches { Status::Pass } else { Status::Fail },
            seed: cfg.seed,
            details: json!({
                "lp_value": value.to_string(),
                "oracle_optimum": ps.oracle_optimum.to_string(),
            }),
        });
    }
    out
}

fn seeded_rng(seed: u64, instance: &str, config: &str, what: &str) -> ChaCha8Rng {
    // Stable per-(instance, config, purpose) streams independent of
    // execution order.
    let mut h: u64 = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in instance.bytes().chain(config.bytes()).chain(what.bytes()) {
        h = h.wrapping_mul(0x100_0000_01b3).wrapping_add(b as u64);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn random_accepting_trace(
    a: &TShapedAutomaton,
    rng: &mut ChaCha8Rng,
) -> Option<(Term, Trace)> {
    if a.finals.is_empty() {
        return None;
    }
    let finals: Vec<usize> = a.finals.iter().copied().collect();
    let n = a.node_count();
    let mut states = vec![usize::MAX; n];
    let mut labels = vec![0usize; n];
    states[a.root()] = finals[rng.random_range(0..finals.len())];
    for u in (0..n).rev() {
        let q = states[u];
        let incoming: Vec<&crate::automaton::Transition> =
            a.transitions[u].iter().filter(|t| t.consequent == q).collect();
        let tr = incoming[rng.random_range(0..incoming.len())];
        labels[u] = tr.symbol;
        for (&qc, &c) in tr.antecedents.iter().zip(a.shape.children(u)) {
            states[c] = qc;
        }
    }
    Some((Term { labels }, Trace { states }))
}

/// Trace feasibility and the vector round trip: random accepting traces give
/// vectors satisfying every row with per-node group sums exactly one, and
/// reading the vector back yields the same term and trace.
pub fn check_trace_feasibility(
    inst: &Instance,
    systems: &[PreparedSystem],
    cfg: &CheckConfig,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for ps in systems {
        let mut rng = seeded_rng(cfg.seed, &inst.name, &ps.core.name(), "traces");
        let mut feasible_ok = true;
        let mut sums_ok = true;
        let mut round_trip_ok = true;
        for _ in 0..cfg.random_traces {
            let Some((term, trace)) = random_accepting_trace(&ps.automaton, &mut rng) else {
                break;
            };
            let v = trace_vector(&ps.automaton, &term, &trace)
                .expect("sampled assignment is a trace");
            feasible_ok &= check_feasible(&ps.system, &v).is_empty();
            sums_ok &= all_node_sums_are_one(&ps.system, &v);
            round_trip_ok &= integral_to_trace(&ps.automaton, &ps.system, &v)
                .map(|(t2, r2)| t2 == term && r2 == trace)
                .unwrap_or(false);
        }
        out.push(CheckReport {
            check: "trace-feasibility",
            anchor: "eq3-eq7",
            instance: inst.name.clone(),
            config: ps.core.name(),
            status: if feasible_ok && sums_ok { Status::Pass } else { Status::Fail },
            seed: cfg.seed,
            details: json!({
                "traces": cfg.random_traces,
                "feasible": feasible_ok,
                "node_sums_one": sums_ok,
            }),
        });
        out.push(CheckReport {
            check: "vector-round-trip",
            anchor: "serialization",
            instance: inst.name.clone(),
            config: ps.core.name(),
            status: if round_trip_ok { Status::Pass } else { Status::Fail },
            seed: cfg.seed,
            details: json!({ "traces": cfg.random_traces }),
        });
    }
    out
}

/// Convex decomposition: random convex combinations of accepting traces are
/// reconstructed exactly, with positive weights summing to one, all parts
/// accepting, and at most |support| rounds.
pub fn check_convex_decomposition(
    inst: &Instance,
    systems: &[PreparedSystem],
    cfg: &CheckConfig,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for ps in systems {
        let mut rng = seeded_rng(cfg.seed, &inst.name, &ps.core.name(), "combinations");
        let mut ok = true;
        let mut detail = json!({});
        'combos: for _ in 0..cfg.random_combinations {
            let count = rng.random_range(1..=5usize);
            let mut vectors = Vec::new();
            for _ in 0..count {
                let Some((term, trace)) = random_accepting_trace(&ps.automaton, &mut rng)
                else {
                    break 'combos;
                };
                vectors.push(
                    trace_vector(&ps.automaton, &term, &trace)
                        .expect("sampled assignment is a trace"),
                );
            }
            let raw: Vec<i64> =
                (0..vectors.len()).map(|_| rng.random_range(1..=9)).collect();
            let total: i64 = raw.iter().sum();
            let mut v = RationalVector::new();
            for (w, tv) in raw.iter().zip(&vectors) {
                v = v.add_scaled(&Rat::new((*w).into(), total.into()), tv);
            }
            // Convex combinations stay feasible with unit per-node group
            // sums and all entries in [0,1] (the bound rows are part of the
            // feasibility check).
            if !check_feasible(&ps.system, &v).is_empty()
                || !all_node_sums_are_one(&ps.system, &v)
            {
                ok = false;
                detail = json!({ "combination_feasible": false });
                break;
            }
            let d = match decompose(&ps.automaton, &ps.system, &v) {
                Ok(d) => d,
                Err(e) => {
                    ok = false;
                    detail = json!({ "error": e.to_string() });
                    break;
                }
            };
            let reconstructs = d.reconstruct(&ps.automaton) == v;
            let weights_ok = d.weight_sum().is_one()
                && d.parts.iter().all(|(w, _, _)| w.is_positive());
            let parts_accepting = d
                .parts
                .iter()
                .all(|(_, term, trace)| is_accepting_trace(&ps.automaton, term, trace));
            let bounded = d.parts.len() <= v.support_len();
            if !(reconstructs && weights_ok && parts_accepting && bounded) {
                ok = false;
                detail = json!({
                    "reconstructs": reconstructs,
                    "weights_ok": weights_ok,
                    "parts_accepting": parts_accepting,
                    "iterations_bounded": bounded,
                });
                break;
            }
        }
        out.push(CheckReport {
            check: "convex-decomposition",
            anchor: "support-shrinking",
            instance: inst.name.clone(),
            config: ps.core.name(),
            status: if ok { Status::Pass } else { Status::Fail },
            seed: cfg.seed,
            details: if ok {
                json!({ "combinations": cfg.random_combinations })
            } else {
                detail
            },
        });
    }
    out
}

/// Size identities: variable and equality counts match the closed formulas
/// exactly on every build.
pub fn check_size_identities(
    inst: &Instance,
    systems: &[PreparedSystem],
    cfg: &CheckConfig,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for ps in systems {
        let s = &ps.system.sizes;
        let vars_ok = ps.system.variable_count() == s.expected_variables();
        let eqs_ok = ps.system.equality_count() == s.expected_equalities();
        let bounds_ok = ps.system.bound_pair_count() == ps.system.variable_count();
        let width_ok = ps.automaton.width() == ps.tables.max_table_size;
        let ok = vars_ok && eqs_ok && bounds_ok && width_ok;
        out.push(CheckReport {
            check: "size-identities",
            anchor: "counting",
            instance: inst.name.clone(),
            config: ps.core.name(),
            status: if ok { Status::Pass } else { Status::Fail },
            seed: cfg.seed,
            details: json!({
                "variables": ps.system.variable_count(),
                "equalities": ps.system.equality_count(),
                "bound_pairs": ps.system.bound_pair_count(),
                "states": s.states,
                "transitions": s.transitions,
                "nodes": s.nodes,
                "sigma": s.sigma,
            }),
        });
    }
    out
}

/// Solution preservation for the five corrected cores, and mutation
/// detection for the two deliberately uncorrected variants.
pub fn check_preservation(inst: &Instance, cfg: &CheckConfig) -> Vec<CheckReport> {
    let n = inst.graph.n() as u32;
    let mut out = Vec::new();
    let corrected = [
        ProblemSpec::independent_set(1),
        ProblemSpec::dominating_set(n.max(1)),
        ProblemSpec::cut(1),
        ProblemSpec::hamiltonian_cycle(),
        ProblemSpec::coloring(3),
    ];
    for spec in corrected {
        let core = core_for(&spec, &inst.graph, false);
        let report = crate::cores::check_solution_preserving(
            core.as_ref(),
            &inst.nd,
            &inst.index,
            &inst.graph,
            &spec,
            cfg.witness_limit,
            cfg.oracle_budget,
        )
        .expect("corpus instances fit the oracle budget");
        let status = if report.holds() {
            Status::Pass
        } else if report.partial {
            Status::Partial
        } else {
            Status::Fail
        };
        out.push(CheckReport {
            check: "solution-preservation",
            anchor: "preservation",
            instance: inst.name.clone(),
            config: core.name(),
            status,
            seed: cfg.seed,
            details: json!({
                "witness_trees": report.witness_tree_count,
                "solutions": report.solution_count,
                "bogus": report.bogus_extractions.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "missing": report.missing_solutions.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
        });
    }
    for spec in [ProblemSpec::dominating_set(1), ProblemSpec::hamiltonian_cycle()] {
        let core = core_for(&spec, &inst.graph, true);
        let report = crate::cores::check_solution_preserving(
            core.as_ref(),
            &inst.nd,
            &inst.index,
            &inst.graph,
            &spec,
            cfg.witness_limit,
            cfg.oracle_budget,
        )
        .expect("corpus instances fit the oracle budget");
        let detected = !report.extracted_all_solutions || !report.all_solutions_extracted;
        out.push(CheckReport {
            check: "mutation-detection",
            anchor: "preservation",
            instance: inst.name.clone(),
            config: core.name(),
            status: if detected { Status::Detected } else { Status::NotDetected },
            seed: cfg.seed,
            details: json!({
                "condition1_violated": !report.extracted_all_solutions,
                "condition2_violated": !report.all_solutions_extracted,
                "counterexamples": report
                    .bogus_extractions
                    .iter()
                    .chain(report.missing_solutions.iter())
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>(),
            }),
        });
    }
    out
}

/// Emit -> parse -> emit is byte identical, and the parsed system equals the
/// built one.
pub fn check_lp_round_trip(
    inst: &Instance,
    systems: &[PreparedSystem],
    cfg: &CheckConfig,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let ps = &systems[0];
    let mut rng = seeded_rng(cfg.seed, &inst.name, &ps.core.name(), "lp");
    let unit = project_objective(&inst.index, &ps.automaton, &ps.unit_weights).unwrap();
    let objectives = [BTreeMap::new(), unit, random_objective(&ps.system, &mut rng)];
    let mut ok = true;
    for (i, obj) in objectives.iter().enumerate() {
        let sense = if i % 2 == 0 { Sense::Minimize } else { Sense::Maximize };
        let text = emit_lp(&ps.system, obj, sense);
        match parse_lp(&text) {
            Ok(parsed) => {
                ok &= parsed.system == ps.system
                    && parsed.objective == *obj
                    && emit_lp(&parsed.system, &parsed.objective, parsed.sense) == text;
            }
            Err(_) => ok = false,
        }
    }
    out.push(CheckReport {
        check: "lp-round-trip",
        anchor: "serialization",
        instance: inst.name.clone(),
        config: ps.core.name(),
        status: if ok { Status::Pass } else { Status::Fail },
        seed: cfg.seed,
        details: json!({ "objectives": objectives.len() }),
    });
    out
}

/// Runs every check on one instance.
pub fn check_instance(inst: &Instance, cfg: &CheckConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    out.extend(check_language_equality(inst, cfg));
    let systems = optimization_systems(inst, cfg);
    out.extend(check_size_identities(inst, &systems, cfg));
    out.extend(check_trace_feasibility(inst, &systems, cfg));
    out.extend(check_convex_decomposition(inst, &systems, cfg));
    out.extend(check_integrality_and_optimum(inst, &systems, cfg));
    out.extend(check_lp_round_trip(inst, &systems, cfg));
    out.extend(check_preservation(inst, cfg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_all(name: &str, text: &str) {
        let g = Graph::parse(text).unwrap();
        let inst = Instance::prepare(name, g);
        let cfg = CheckConfig {
            random_objectives: 3,
            random_traces: 10,
            random_combinations: 5,
            ..CheckConfig::default()
        };
        let reports = check_instance(&inst, &cfg);
        for r in &reports {
            assert!(
                r.passed(),
                "{} {} on {}: {:?} {:?}",
                r.check,
                r.config,
                r.instance,
                r.status,
                r.details
            );
        }
    }

    #[test]
    fn p3_passes_all_checks() {
        check_all("P3", "p 3 2\ne 1 2\ne 2 3\n");
    }

    #[test]
    fn triangle_passes_all_checks() {
        check_all("K3", "p 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    }

    #[test]
    fn c5_passes_all_checks() {
        check_all("C5", "p 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n");
    }

    #[test]
    fn witness_tree_language_route_matches_fragment_route() {
        use crate::automaton::enumerate_language;
        for text in [
            "p 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n",
            "p 4 5\ne 1 2\ne 2 3\ne 3 4\ne 1 4\ne 1 3\n",
        ] {
            let g = Graph::parse(text).unwrap();
            let inst = Instance::prepare("route-check", g);
            let cfg = CheckConfig::default();
            for base in [
                ProblemSpec::hamiltonian_cycle(),
                ProblemSpec::independent_set(0),
                ProblemSpec::cut(0),
            ] {
                let run = run_family(&inst, base, &cfg);
                let direct = enumerate_language(&run.automaton, 1_000_000).unwrap();
                let by_state =
                    language_by_root_state_via_witness_trees(&inst, &run, 1_000_000).unwrap();
                let root = inst.nd.root();
                let mut via_trees = BTreeSet::new();
                for &q in &run.automaton.finals {
                    via_trees.extend(by_state[q].iter().cloned());
                }
                assert_eq!(direct, via_trees, "{} on {text:?}", run.core.name());
                let _ = root;
            }
        }
    }

    #[test]
    fn mutation_detected_on_k2() {
        let g = Graph::parse("p 2 1\ne 1 2\n").unwrap();
        let inst = Instance::prepare("K2", g);
        let cfg = CheckConfig::default();
        let reports = check_preservation(&inst, &cfg);
        let ds_literal = reports
            .iter()
            .find(|r| r.check == "mutation-detection" && r.config.contains("dominating"))
            .unwrap();
        assert_eq!(ds_literal.status, Status::Detected);
    }

    #[test]
    fn mutation_detected_on_triangle_hc() {
        let g = Graph::parse("p 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        let inst = Instance::prepare("K3", g);
        let cfg = CheckConfig::default();
        let reports = check_preservation(&inst, &cfg);
        let hc_literal = reports
            .iter()
            .find(|r| r.check == "mutation-detection" && r.config.contains("hamiltonian"))
            .unwrap();
        assert_eq!(hc_literal.status, Status::Detected);
    }
}
