//! Exhaustive solver. Ground truth for the other methods.

use std::time::Instant;

use crate::error::{CmsError, Result};
use crate::eval::CompiledProfile;
use crate::profile::{Outcome, Profile};
use crate::solve::{Method, SolveResult, SolveStats};
use crate::validate::ensure_valid;

pub const DEFAULT_BRUTE_LIMIT: usize = 24;

/// Hard ceiling independent of the caller's limit; outcomes are packed in a `u64`.
const MAX_ISSUES: usize = 40;

/// Lexicographic rank of a packed outcome: issue 0 is the most significant
/// position, `false` sorts before `true`.
fn lex_key(mask: u64, m: usize) -> u64 {
    if m == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - m)
    }
}

/// Minimum-cost outcome by enumerating all `2^m` outcomes in Gray-code
/// order, re-evaluating only the entries that mention the flipped issue.
/// Ties go to the lexicographically smallest outcome.
pub fn solve_exhaustive(profile: &Profile, limit: usize) -> Result<SolveResult> {
    let start = Instant::now();
    let m = profile.m();
    let limit = limit.min(MAX_ISSUES);
    if m > limit {
        return Err(CmsError::SizeLimit {
            what: "profile",
            size: m,
            limit,
        });
    }
    ensure_valid(profile)?;

    let compiled = CompiledProfile::new(profile);
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (ei, e) in compiled.entries.iter().enumerate() {
        touching[e.target].push(ei);
        for &d in &e.deps {
            touching[d].push(ei);
        }
    }

    let mut mask = 0u64;
    let mut contrib: Vec<u64> = compiled.entries.iter().map(|e| e.cost(0)).collect();
    let mut total: u64 = contrib.iter().sum();
    let mut best = (total, lex_key(0, m), 0u64);

    for step in 1u64..1 << m {
        let j = step.trailing_zeros() as usize;
        mask ^= 1 << j;
        for &ei in &touching[j] {
            let c = compiled.entries[ei].cost(mask);
            total = total - contrib[ei] + c;
            contrib[ei] = c;
        }
        let cand = (total, lex_key(mask, m), mask);
        if cand < best {
            best = cand;
        }
    }

    Ok(SolveResult {
        outcome: Outcome::from_mask(best.2, m),
        cost: best.0,
        method: Method::Brute,
        stats: SolveStats {
            explored: 1 << m,
            elapsed: start.elapsed(),
        },
        satisfied_clauses: None,
        trace: None,
    })
}
