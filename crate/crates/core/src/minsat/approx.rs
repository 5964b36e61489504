//! MIN SAT: minimise the number of satisfied clauses.
//!
//! A set of clauses can be falsified simultaneously iff no two of them hold
//! complementary literals and none is a tautology. The satisfied clauses of
//! any assignment therefore form a vertex cover of the conflict graph (one
//! vertex per clause, an edge per complementary pair, a self-loop per
//! tautology), and every vertex cover is realised by some assignment.
//! A maximal matching gives a cover at most twice the minimum.

use serde::Serialize;

use crate::error::{CmsError, Result};
use crate::minsat::formula::CnfInstance;

pub const DEFAULT_MINSAT_EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinSatResult {
    pub assignment: Vec<bool>,
    pub satisfied: u64,
}

fn lit_index(var: usize, negated: bool) -> usize {
    var * 2 + usize::from(negated)
}

/// Factor-2 approximation via greedy maximal matching on the conflict graph.
///
/// Clauses are scanned in index order; each unmatched, non-tautological
/// clause is matched with the lowest-index unmatched clause that holds a
/// complementary literal. Clauses outside the resulting cover are falsified
/// by setting each of their literals false; every other variable is false.
pub fn minsat_2approx(instance: &CnfInstance) -> MinSatResult {
    let n = instance.clauses.len();
    let nvars = instance
        .clauses
        .iter()
        .flat_map(|c| c.literals().iter().map(|l| l.var + 1))
        .max()
        .unwrap_or(0)
        .max(instance.num_vars);

    let tautology: Vec<bool> = instance.clauses.iter().map(|c| c.is_tautology()).collect();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); nvars * 2];
    for (ci, c) in instance.clauses.iter().enumerate() {
        for l in c.literals() {
            occurrences[lit_index(l.var, l.negated)].push(ci);
        }
    }
    // entries before the cursor are matched or tautological, permanently
    let mut cursor = vec![0usize; nvars * 2];
    let mut matched = vec![false; n];

    for ci in 0..n {
        if tautology[ci] || matched[ci] {
            continue;
        }
        let mut partner: Option<usize> = None;
        for l in instance.clauses[ci].literals() {
            let li = lit_index(l.var, !l.negated);
            let occ = &occurrences[li];
            let cur = &mut cursor[li];
            while *cur < occ.len() && (matched[occ[*cur]] || tautology[occ[*cur]]) {
                *cur += 1;
            }
            if let Some(&cj) = occ.get(*cur) {
                partner = Some(partner.map_or(cj, |p| p.min(cj)));
            }
        }
        if let Some(cj) = partner {
            matched[ci] = true;
            matched[cj] = true;
        }
    }

    let mut assignment = vec![false; instance.num_vars.max(nvars)];
    for (ci, c) in instance.clauses.iter().enumerate() {
        if !matched[ci] && !tautology[ci] {
            for l in c.literals() {
                assignment[l.var] = l.negated;
            }
        }
    }
    assignment.truncate(instance.num_vars.max(nvars));
    let satisfied = instance.satisfied_count(&assignment);
    MinSatResult {
        assignment,
        satisfied,
    }
}

/// Exact MIN SAT by exhaustive enumeration. Ties go to the lexicographically
/// smallest assignment (variable 0 first, `false` before `true`).
pub fn minsat_exact(instance: &CnfInstance, limit: usize) -> Result<MinSatResult> {
    let nv = instance.num_vars;
    let limit = limit.min(32);
    if nv > limit {
        return Err(CmsError::SizeLimit {
            what: "MIN SAT instance",
            size: nv,
            limit,
        });
    }
    let packed: Vec<(u64, u64)> = instance
        .clauses
        .iter()
        .map(|c| {
            c.literals().iter().fold((0, 0), |(p, n), l| {
                // the most significant position holds variable 0
                let bit = 1u64 << (nv - 1 - l.var);
                if l.negated {
                    (p, n | bit)
                } else {
                    (p | bit, n)
                }
            })
        })
        .collect();
    let full = if nv == 0 { 0 } else { u64::MAX >> (64 - nv) };
    let mut best = (u64::MAX, 0u64);
    for bits in 0u64..=full {
        let sat = packed
            .iter()
            .filter(|&&(p, n)| bits & p != 0 || !bits & n & full != 0)
            .count() as u64;
        if sat < best.0 {
            best = (sat, bits);
            if sat == 0 {
                break;
            }
        }
    }
    let assignment = (0..nv).map(|v| best.1 >> (nv - 1 - v) & 1 == 1).collect();
    Ok(MinSatResult {
        assignment,
        satisfied: best.0,
    })
}
