//! Approximate solving through MIN SAT.
//!
//! Each (voter, issue) pair becomes a CNF that is satisfied exactly when the
//! voter is dissatisfied with the issue. The multiset union of those CNFs is
//! handed to a MIN SAT routine and the resulting truth assignment is read
//! back as an outcome.

mod approx;
mod dimacs;
mod formula;

use std::time::Instant;

pub use approx::{minsat_2approx, minsat_exact, MinSatResult, DEFAULT_MINSAT_EXACT_LIMIT};
pub use dimacs::{export_dimacs, parse_assignment, to_dimacs_string};
pub use formula::{
    build_cij, dnf_to_cnf, reduce, Clause, CnfInstance, DnfFormula, Literal, Provenance, MAX_INDEGREE_CAP,
};

use crate::error::{CmsError, Result};
use crate::eval::total_cost;
use crate::profile::{Outcome, Profile};
use crate::solve::{Method, SolveResult, SolveStats};

/// Reduce, approximate MIN SAT within factor 2, read the outcome off the
/// assignment. The reported cost is recomputed on the profile.
pub fn solve_via_minsat(profile: &Profile, indegree_cap: usize) -> Result<SolveResult> {
    let start = Instant::now();
    let instance = reduce(profile, indegree_cap)?;
    let sat = minsat_2approx(&instance);
    finish(profile, &instance, sat.assignment, start)
}

/// Like [`solve_via_minsat`], with the truth assignment supplied by an
/// external MIN SAT or MaxSAT solver.
pub fn solve_with_assignment(
    profile: &Profile,
    instance: &CnfInstance,
    assignment: Vec<bool>,
) -> Result<SolveResult> {
    if assignment.len() != profile.m() || instance.num_vars != profile.m() {
        return Err(CmsError::Malformed(format!(
            "assignment has {} variables, profile has {} issues",
            assignment.len(),
            profile.m()
        )));
    }
    finish(profile, instance, assignment, Instant::now())
}

fn finish(
    profile: &Profile,
    instance: &CnfInstance,
    mut assignment: Vec<bool>,
    start: Instant,
) -> Result<SolveResult> {
    assignment.resize(profile.m(), false);
    let satisfied = instance.satisfied_count(&assignment);
    let outcome = Outcome::new(assignment);
    let cost = total_cost(profile, &outcome)?;
    Ok(SolveResult {
        outcome,
        cost,
        method: Method::Minsat,
        stats: SolveStats {
            explored: instance.clauses.len() as u64,
            elapsed: start.elapsed(),
        },
        satisfied_clauses: Some(satisfied),
        trace: None,
    })
}
