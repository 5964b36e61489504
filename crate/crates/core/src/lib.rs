//! Conditional Minisum for multi-issue approval elections with conditional
//! ballots.
//!
//! Each voter casts, for every binary issue, a set of approved
//! `(condition, value)` statements where the condition fixes the values of
//! the issues that voter's opinion depends on. A voter is dissatisfied with
//! an issue when no approved statement matches the outcome; the rule picks
//! the outcome minimising the weighted number of dissatisfactions.
//!
//! Three solvers are provided:
//!
//! * [`brute::solve_exhaustive`]: exact, exponential in the number of issues.
//! * [`elim::solve_elimination`]: exact and polynomial when every voter's
//!   in-degree is at most one and the global dependency graph has treewidth
//!   at most two.
//! * [`minsat::solve_via_minsat`]: reduction to MIN SAT solved by a
//!   factor-2 approximation, for bounded in-degree.

pub mod brute;
pub mod elim;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod json;
pub mod minsat;
pub mod profile;
pub mod solve;
pub mod validate;

pub use brute::{solve_exhaustive, DEFAULT_BRUTE_LIMIT};
pub use elim::{solve_elimination, EliminationCase, EliminationStep};
pub use error::{CmsError, Result};
pub use eval::{cost_breakdown, dissatisfaction, total_cost};
pub use generate::{generate, GenParams, Topology};
pub use graph::{global_graph, max_indegree, GlobalGraph, IndegreeReport};
pub use minsat::{solve_via_minsat, MAX_INDEGREE_CAP};
pub use profile::{
    ApprovalStatement, BallotEntry, Condition, ConditionalBallot, Issue, IssueId, Outcome, Profile,
};
pub use solve::{Method, SolveResult, SolveStats};
pub use validate::{validate, Severity, Violation, ViolationKind};
