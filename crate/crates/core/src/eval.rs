//! Dissatisfaction (generalised Hamming distance) of ballots and profiles.

use crate::error::{CmsError, Result};
use crate::profile::{ConditionalBallot, IssueId, Outcome, Profile};

fn check_len(m: usize, outcome: &Outcome) -> Result<()> {
    if outcome.len() != m {
        return Err(CmsError::Malformed(format!(
            "outcome assigns {} issues, profile has {m}",
            outcome.len()
        )));
    }
    Ok(())
}

/// Number of issues the voter is dissatisfied with under `outcome`,
/// ignoring the ballot's weight.
pub fn dissatisfaction(ballot: &ConditionalBallot, outcome: &Outcome) -> Result<u32> {
    check_len(ballot.entries.len(), outcome)?;
    let values = outcome.values();
    Ok(ballot
        .entries
        .iter()
        .filter(|e| !e.is_satisfied_by(values))
        .count() as u32)
}

/// Weighted total dissatisfaction `Σ weight_i · δ_i(outcome)`.
pub fn total_cost(profile: &Profile, outcome: &Outcome) -> Result<u64> {
    check_len(profile.m(), outcome)?;
    profile
        .voters()
        .iter()
        .map(|b| Ok(b.weight * u64::from(dissatisfaction(b, outcome)?)))
        .sum()
}

/// Unweighted per-voter dissatisfaction and the weighted total.
pub fn cost_breakdown(profile: &Profile, outcome: &Outcome) -> Result<(Vec<u32>, u64)> {
    check_len(profile.m(), outcome)?;
    let per_voter = profile
        .voters()
        .iter()
        .map(|b| dissatisfaction(b, outcome))
        .collect::<Result<Vec<_>>>()?;
    let total = per_voter
        .iter()
        .zip(profile.voters())
        .map(|(&d, b)| b.weight * u64::from(d))
        .sum();
    Ok((per_voter, total))
}

/// Ballot entry flattened to a lookup over bit-packed outcomes.
///
/// A combination index packs `depends_on[b]` into bit `b` and the target
/// issue into bit `k`.
pub(crate) struct CompiledEntry {
    pub weight: u64,
    pub target: IssueId,
    pub deps: Vec<IssueId>,
    approved: Vec<u64>,
}

impl CompiledEntry {
    pub fn combo(&self, mask: u64) -> u64 {
        let mut c = 0u64;
        for (b, &d) in self.deps.iter().enumerate() {
            c |= (mask >> d & 1) << b;
        }
        c | (mask >> self.target & 1) << self.deps.len()
    }

    pub fn cost(&self, mask: u64) -> u64 {
        if self.approved.binary_search(&self.combo(mask)).is_ok() {
            0
        } else {
            self.weight
        }
    }
}

/// Profile compiled for repeated evaluation on outcomes packed into a `u64`
/// (bit `i` = issue `i`). Requires a valid profile with `m < 64`.
pub(crate) struct CompiledProfile {
    pub entries: Vec<CompiledEntry>,
}

impl CompiledProfile {
    pub fn new(profile: &Profile) -> Self {
        let m = profile.m();
        assert!(m < 64, "compiled profiles are limited to 63 issues");
        let mut entries = Vec::new();
        for ballot in profile.voters() {
            for e in &ballot.entries {
                let k = e.depends_on.len();
                let mut approved: Vec<u64> = e
                    .statements
                    .iter()
                    .map(|s| {
                        let mut c = 0u64;
                        for (b, &d) in e.depends_on.iter().enumerate() {
                            c |= u64::from(s.when.get(d).unwrap_or(false)) << b;
                        }
                        c | u64::from(s.value) << k
                    })
                    .collect();
                approved.sort_unstable();
                approved.dedup();
                entries.push(CompiledEntry {
                    weight: ballot.weight,
                    target: e.issue,
                    deps: e.depends_on.clone(),
                    approved,
                });
            }
        }
        CompiledProfile { entries }
    }

    #[cfg(test)]
    pub fn cost(&self, mask: u64) -> u64 {
        self.entries.iter().map(|e| e.cost(mask)).sum()
    }
}
