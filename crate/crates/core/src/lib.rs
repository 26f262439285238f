//! Turns solution-preserving dynamic programming over nice edge-introducing
//! tree decompositions into exact extended formulations of solution
//! polytopes, and verifies the construction end to end with exact rational
//! arithmetic against a brute-force oracle.
//!
//! Pipeline: graph -> nice decomposition -> DP tables -> tree-shaped
//! automaton -> linear system -> exact simplex / convex decomposition.

pub mod automaton;
pub mod checks;
pub mod cores;
pub mod corpus;
pub mod decomposition;
pub mod formulation;
pub mod graph;
pub mod rational;
pub mod simplex;
pub mod verify;
pub mod witness;

pub use cores::{core_for, run_tables, DpCore, Tables, WitnessTree};
pub use decomposition::{
    build_heuristic_td, designated_index, make_nice, parse_td, validate_nice, validate_raw,
    DesignatedIndex, NiceDecomposition, NodeId, NodeKind, RawDecomposition,
};
pub use graph::{
    brute_force_solutions, is_solution, Graph, ProblemKind, ProblemSpec, SolutionTuple,
};
pub use rational::Rat;
pub use witness::Witness;
