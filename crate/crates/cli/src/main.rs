//! Batch entry point wiring the pipeline:
//! decompose -> tables -> automaton -> emit-lp -> solve -> verify.
//!
//! Exit status: 0 success, 2 usage error (clap), 3 input error,
//! 4 check failure, 5 overflow.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tdpoly::automaton::{build_automaton, enumerate_language, AutomatonError};
use tdpoly::checks::{
    check_convex_decomposition, check_instance, check_integrality_and_optimum,
    check_lp_round_trip, check_size_identities, check_trace_feasibility,
    optimization_systems, CheckConfig, CheckReport, Instance,
};
use tdpoly::cores::{core_for, run_tables};
use tdpoly::decomposition::{
    build_heuristic_td, designated_index, make_nice, parse_td, validate_nice, validate_raw,
    NiceDecomposition,
};
use tdpoly::formulation::{
    build_system, emit_lp, project_objective, Sense, Weights,
};
use tdpoly::graph::{Graph, ProblemKind, ProblemSpec, DEFAULT_ORACLE_BUDGET};
use tdpoly::rational::parse_rat;
use tdpoly::simplex::{optimize, SolveError};
use tdpoly::verify::integral_to_trace;

#[derive(Parser)]
#[command(name = "tdpoly", version)]
#[command(about = "Tree-decomposition dynamic programming compiled into exact extended formulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Is,
    Ds,
    Cut,
    Hc,
    Coloring,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem kind.
    #[arg(long, value_enum)]
    problem: Problem,
    /// Size threshold (independent set / dominating set / cut).
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// Number of colors (coloring).
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// Use the deliberately uncorrected table rules where available.
    #[arg(long)]
    uncorrected: bool,
}

impl ProblemArgs {
    fn spec(&self) -> ProblemSpec {
        match self.problem {
            Problem::Is => ProblemSpec::independent_set(self.l),
            Problem::Ds => ProblemSpec::dominating_set(self.l),
            Problem::Cut => ProblemSpec::cut(self.l),
            Problem::Hc => ProblemSpec::hamiltonian_cycle(),
            Problem::Coloring => ProblemSpec::coloring(self.d),
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list graph file (`p <n> <m>` header, `e <u> <v>` lines).
    graph: PathBuf,
    /// Optional PACE-style .td file; defaults to the min-fill heuristic.
    #[arg(long)]
    td: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or ingest) a tree decomposition and emit the nice form.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the table process and print per-node table sizes.
    Tables {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Dump the automaton: per node, cell size and transition count.
    Automaton {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Also list every transition with witness hex.
        #[arg(long)]
        full: bool,
    },
    /// Emit the linear system in LP format.
    EmitLp {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Objective: element weights file, `unit`, or `none`.
        #[arg(long, default_value = "none")]
        objective: String,
        /// Optimization sense for the emitted objective.
        #[arg(long, value_parser = parse_sense, default_value = "max")]
        sense: Sense,
        /// Output format: `lp` or `jsonl` (one constraint object per line).
        #[arg(long, default_value = "lp")]
        format: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimize over the extended formulation and decode the solution.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Objective: element weights file or `unit`.
        #[arg(long, default_value = "unit")]
        objective: String,
        /// Optimization sense; defaults per problem kind.
        #[arg(long, value_parser = parse_sense)]
        sense: Option<Sense>,
    },
    /// Exact-verification checks (traces, decomposition, round trips,
    /// integrality) for one instance, as JSON.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0x7d17)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full per-instance acceptance checks and write a JSON report.
    CrossValidate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0x7d17)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_sense(s: &str) -> Result<Sense, String> {
    match s {
        "max" | "maximize" => Ok(Sense::Maximize),
        "min" | "minimize" => Ok(Sense::Minimize),
        _ => Err("expected `max` or `min`".to_string()),
    }
}

/// Error category for the exit status.
enum Outcome {
    Ok,
    InputError(anyhow::Error),
    CheckFailure(String),
    Overflow(String),
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `tdpoly ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::InputError(e)) | Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Ok(Outcome::CheckFailure(msg)) => {
            eprintln!("check failure: {msg}");
            ExitCode::from(4)
        }
        Ok(Outcome::Overflow(msg)) => {
            eprintln!("overflow: {msg}");
            ExitCode::from(5)
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_decomposition(input: &InputArgs, g: &Graph) -> Result<NiceDecomposition> {
    let raw = match &input.td {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let raw = parse_td(&text, g).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            let violations = validate_raw(g, &raw);
            if !violations.is_empty() {
                bail!(
                    "{}: invalid decomposition: {}",
                    path.display(),
                    violations
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("; ")
                );
            }
            raw
        }
        None => build_heuristic_td(g),
    };
    make_nice(g, &raw).map_err(|e| anyhow!("{e}"))
}

fn oracle_budget() -> u64 {
    std::env::var("TDPOLY_ORACLE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

fn load_weights(spec_path: &str, g: &Graph, spec: &ProblemSpec) -> Result<Weights> {
    if spec_path == "unit" {
        let (d1, _) = spec.arity();
        return Ok(if d1 > 0 {
            Weights {
                vertices: g.vertices().map(|v| (v, tdpoly::rational::rat(1))).collect(),
                edges: BTreeMap::new(),
            }
        } else {
            Weights {
                vertices: BTreeMap::new(),
                edges: g.edge_ids().map(|e| (e, tdpoly::rational::rat(1))).collect(),
            }
        });
    }
    let text = fs::read_to_string(spec_path)
        .with_context(|| format!("reading weights file {spec_path}"))?;
    let mut w = Weights::default();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let mut parts = t.split_whitespace();
        let kind = parts.next().unwrap();
        let id: u32 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| anyhow!("weights line {}: malformed", i + 1))?;
        let value = parts
            .next()
            .and_then(parse_rat)
            .ok_or_else(|| anyhow!("weights line {}: bad rational", i + 1))?;
        match kind {
            "v" => {
                w.vertices.insert(id, value);
            }
            "e" => {
                w.edges.insert(id, value);
            }
            _ => bail!("weights line {}: expected `v` or `e`", i + 1),
        }
    }
    Ok(w)
}

fn write_or_print(out: &Option<PathBuf>, name: &str, content: &str) -> Result<()> {
    match out {
        Some(dir_or_file) => {
            let path = if dir_or_file.extension().is_some() {
                dir_or_file.clone()
            } else {
                fs::create_dir_all(dir_or_file)?;
                dir_or_file.join(name)
            };
            fs::write(&path, content)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Decompose { input, out } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let raw = if input.td.is_none() {
                Some(build_heuristic_td(&g))
            } else {
                None
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let report = validate_nice(&g, &nd);
            if !report.is_valid() {
                return Ok(Outcome::CheckFailure(format!(
                    "nice decomposition invalid: {:?}",
                    report.violations
                )));
            }
            let stem = input
                .graph
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "graph".to_string());
            eprintln!(
                "nodes: {}, width: {}, edges introduced: {}",
                nd.len(),
                nd.width(),
                nd.edge_node.len()
            );
            let out_is_dir = out.as_ref().map(|p| p.extension().is_none()).unwrap_or(false);
            if let (Some(raw), true) = (&raw, out_is_dir) {
                write_or_print(&out, &format!("{stem}.td"), &raw.to_td(g.n()))?;
            }
            write_or_print(&out, &format!("{stem}.ntd"), &nd.to_ntd(g.n()))?;
            Ok(Outcome::Ok)
        }
        Command::Tables { problem, input } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let spec = problem.spec();
            let core = core_for(&spec, &g, problem.uncorrected);
            let tables = run_tables(core.as_ref(), &nd);
            println!("core: {}", core.name());
            println!("decomposition: {} nodes, width {}", nd.len(), nd.width());
            for u in 0..nd.len() {
                println!("  node {u:>4} {:<12} |table| = {}", nd.kinds[u].to_string(), tables.gamma[u].len());
            }
            let ceiling = core.table_ceiling(nd.width(), g.n(), g.m());
            println!(
                "max table size: {} (node {}); analytic ceiling: {}",
                tables.max_table_size,
                tables.max_table_node,
                ceiling.map(|c| c.to_string()).unwrap_or_else(|| "overflow".into())
            );
            println!("accepted: {}", tables.accepted);
            Ok(Outcome::Ok)
        }
        Command::Automaton { problem, input, full } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let spec = problem.spec();
            let core = core_for(&spec, &g, problem.uncorrected);
            let tables = run_tables(core.as_ref(), &nd);
            let a = build_automaton(core.as_ref(), &nd, &tables);
            println!(
                "automaton: {} states, {} transitions, width {}, |alphabet| {}",
                a.state_count(),
                a.transition_count(),
                a.width(),
                a.alphabet.len()
            );
            for u in 0..a.node_count() {
                println!(
                    "  node {u:>4} {:<12} |cell| = {:<6} |delta| = {}",
                    nd.kinds[u].to_string(),
                    a.cells[u].len(),
                    a.transitions[u].len()
                );
                if full {
                    for tr in &a.transitions[u] {
                        let ants: Vec<String> = tr
                            .antecedents
                            .iter()
                            .zip(nd.tree.children(u))
                            .map(|(&q, &c)| a.cells[c][q].hex())
                            .collect();
                        println!(
                            "    ({}) --{}--> {}",
                            ants.join(", "),
                            tr.symbol,
                            a.cells[u][tr.consequent].hex()
                        );
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::EmitLp { problem, input, objective, sense, format, out } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let spec = problem.spec();
            let core = core_for(&spec, &g, problem.uncorrected);
            let tables = run_tables(core.as_ref(), &nd);
            let a = build_automaton(core.as_ref(), &nd, &tables);
            let sys = build_system(&a);
            let index = designated_index(&nd)?;
            let obj = if objective == "none" {
                BTreeMap::new()
            } else {
                let weights = match load_weights(&objective, &g, &spec) {
                    Ok(w) => w,
                    Err(e) => return Ok(Outcome::InputError(e)),
                };
                project_objective(&index, &a, &weights)?
            };
            let stem = input
                .graph
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "graph".to_string());
            match format.as_str() {
                "lp" => {
                    write_or_print(&out, &format!("{stem}.lp"), &emit_lp(&sys, &obj, sense))?
                }
                "jsonl" => write_or_print(
                    &out,
                    &format!("{stem}.jsonl"),
                    &tdpoly::formulation::emit_constraints_jsonl(&sys),
                )?,
                other => {
                    return Ok(Outcome::InputError(anyhow!(
                        "unknown format `{other}` (expected `lp` or `jsonl`)"
                    )))
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Solve { problem, input, objective, sense } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let spec = problem.spec();
            let core = core_for(&spec, &g, problem.uncorrected);
            let tables = run_tables(core.as_ref(), &nd);
            let a = build_automaton(core.as_ref(), &nd, &tables);
            let sys = build_system(&a);
            let index = designated_index(&nd)?;
            let weights = match load_weights(&objective, &g, &spec) {
                Ok(w) => w,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let obj = project_objective(&index, &a, &weights)?;
            let sense = sense.unwrap_or(match spec.kind {
                ProblemKind::DominatingSet => Sense::Minimize,
                _ => Sense::Maximize,
            });
            match optimize(&sys, &obj, sense) {
                Ok((value, vertex)) => {
                    let (term, _) = integral_to_trace(&a, &sys, &vertex)
                        .map_err(|e| anyhow!("returned vertex not integral: {e}"))?;
                    let (d1, d2) = core.arity();
                    let sol = tdpoly::automaton::term_to_solution(
                        &index,
                        &a.alphabet,
                        d1,
                        d2,
                        &term,
                    );
                    println!("optimum: {value}");
                    println!("solution: {sol}");
                    Ok(Outcome::Ok)
                }
                Err(SolveError::Infeasible) => Ok(Outcome::CheckFailure(
                    "infeasible: the solution set is empty".to_string(),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { input, seed, out } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let name = input
                .graph
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "instance".to_string());
            let inst = Instance::with_decomposition(name, g, nd);
            let cfg = CheckConfig { seed, oracle_budget: oracle_budget(), ..CheckConfig::default() };
            let systems = optimization_systems(&inst, &cfg);
            let mut reports: Vec<CheckReport> = Vec::new();
            reports.extend(check_size_identities(&inst, &systems, &cfg));
            reports.extend(check_trace_feasibility(&inst, &systems, &cfg));
            reports.extend(check_convex_decomposition(&inst, &systems, &cfg));
            reports.extend(check_integrality_and_optimum(&inst, &systems, &cfg));
            reports.extend(check_lp_round_trip(&inst, &systems, &cfg));
            emit_reports(&reports, &out)
        }
        Command::CrossValidate { problem, input, seed, out } => {
            let g = match load_graph(&input.graph) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let nd = match load_decomposition(&input, &g) {
                Ok(nd) => nd,
                Err(e) => return Ok(Outcome::InputError(e)),
            };
            let name = input
                .graph
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "instance".to_string());
            let inst = Instance::with_decomposition(name, g, nd);
            let cfg = CheckConfig { seed, oracle_budget: oracle_budget(), ..CheckConfig::default() };
            // The requested problem gets a focused language check first.
            let spec = problem.spec();
            let core = core_for(&spec, &inst.graph, problem.uncorrected);
            let tables = run_tables(core.as_ref(), &inst.nd);
            let a = build_automaton(core.as_ref(), &inst.nd, &tables);
            match enumerate_language(&a, CheckConfig::default().language_limit) {
                Ok(lang) => eprintln!(
                    "{}: language has {} terms, accepted: {}",
                    core.name(),
                    lang.len(),
                    tables.accepted
                ),
                Err(AutomatonError::Overflow { limit }) => {
                    return Ok(Outcome::Overflow(format!(
                        "language enumeration exceeded {limit} terms"
                    )))
                }
                Err(e) => return Err(e.into()),
            }
            let reports = check_instance(&inst, &cfg);
            emit_reports(&reports, &out)
        }
    }
}

fn emit_reports(reports: &[CheckReport], out: &Option<PathBuf>) -> Result<Outcome> {
    let json = serde_json::to_string_pretty(reports)?;
    match out {
        Some(path) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{json}"),
    }
    let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::CheckFailure(format!(
            "{} of {} checks failed (first: {} on {})",
            failed.len(),
            reports.len(),
            failed[0].check,
            failed[0].instance
        )))
    }
}
