use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::elim::EliminationStep;
use crate::profile::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Elim,
    Minsat,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Elim => "elim",
            Method::Minsat => "minsat",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Outcomes scanned (brute), eliminations performed (elim) or clauses
    /// built (minsat).
    pub explored: u64,
    pub elapsed: Duration,
}

/// A solver's answer. `cost` is always the weighted dissatisfaction of
/// `outcome` on the input profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub cost: u64,
    pub method: Method,
    pub stats: SolveStats,
    /// Clauses satisfied by the truth assignment (minsat only).
    pub satisfied_clauses: Option<u64>,
    /// Elimination record (elim only).
    pub trace: Option<Vec<EliminationStep>>,
}
