//! Dissatisfaction formulas and their CNF form.

use std::fmt;

use serde::Serialize;

use crate::error::{CmsError, Result};
use crate::profile::{BallotEntry, ConditionalBallot, IssueId, Profile};
use crate::validate::ensure_valid;

/// Largest in-degree accepted by the DNF to CNF conversion.
pub const MAX_INDEGREE_CAP: usize = 10;

/// `x_var` when `negated` is false, its complement otherwise. `x_j` is true
/// iff issue `j` takes value `true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    pub var: IssueId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: IssueId) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: IssueId) -> Self {
        Literal { var, negated: true }
    }

    pub fn complement(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    /// Signed, 1-based DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// The (voter, issue) pair a formula or clause was built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Provenance {
    pub voter: usize,
    pub issue: IssueId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    pub provenance: Provenance,
}

impl Clause {
    /// Sorts and deduplicates the literals. Complementary pairs are kept.
    pub fn new(literals: impl IntoIterator<Item = Literal>, provenance: Provenance) -> Self {
        let mut literals: Vec<_> = literals.into_iter().collect();
        literals.sort_unstable();
        literals.dedup();
        Clause { literals, provenance }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        // sorted by (var, negated): complements are adjacent
        self.literals.windows(2).any(|w| w[0].var == w[1].var)
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.literals.iter().any(|l| l.eval(assignment))
    }
}

/// Disjunction of conjunctions over the target issue and its in-neighbours.
/// True exactly when the voter is dissatisfied with the target issue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfFormula {
    /// In-neighbours in `depends_on` order, then the target issue.
    pub vars: Vec<IssueId>,
    pub terms: Vec<Vec<Literal>>,
    pub provenance: Provenance,
}

impl DnfFormula {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| l.eval(assignment)))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Truth table over `vars`; row `r` binds `vars[b]` to bit `b` of `r`.
    fn truth_table(&self) -> Vec<bool> {
        let nv = self.vars.len();
        let mut scratch = vec![false; self.vars.iter().copied().max().map_or(0, |x| x + 1)];
        (0..1usize << nv)
            .map(|row| {
                for (b, &v) in self.vars.iter().enumerate() {
                    scratch[v] = row >> b & 1 == 1;
                }
                self.eval(&scratch)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    /// Multiset: duplicates are meaningful.
    pub clauses: Vec<Clause>,
}

impl CnfInstance {
    pub fn satisfied_count(&self, assignment: &[bool]) -> u64 {
        self.clauses.iter().filter(|c| c.is_satisfied(assignment)).count() as u64
    }
}

fn entry_dnf(voter: usize, entry: &BallotEntry) -> DnfFormula {
    let k = entry.depends_on.len();
    let mut vars = entry.depends_on.clone();
    vars.push(entry.issue);
    let mut scratch = vec![false; vars.iter().copied().max().unwrap_or(0) + 1];
    let mut terms = Vec::new();
    for row in 0..1usize << (k + 1) {
        for (b, &v) in vars.iter().enumerate() {
            scratch[v] = row >> b & 1 == 1;
        }
        if !entry.is_satisfied_by(&scratch) {
            terms.push(
                vars.iter()
                    .map(|&v| Literal {
                        var: v,
                        negated: !scratch[v],
                    })
                    .collect(),
            );
        }
    }
    DnfFormula {
        vars,
        terms,
        provenance: Provenance {
            voter,
            issue: entry.issue,
        },
    }
}

/// Formula that is true exactly when `ballot` is dissatisfied with `issue`:
/// one conjunction per dissatisfying combination of the issue and its
/// in-neighbours.
pub fn build_cij(voter: usize, ballot: &ConditionalBallot, issue: IssueId) -> Result<DnfFormula> {
    let entry = ballot
        .entry(issue)
        .ok_or_else(|| CmsError::Malformed(format!("voter {voter} has no entry for issue {issue}")))?;
    Ok(entry_dnf(voter, entry))
}

/// Converts a dissatisfaction DNF over at most `k + 1` variables into an
/// equivalent CNF of at most `2^k` clauses with at most `k + 1` literals.
///
/// The never-true formula yields no clauses; the always-true formula yields
/// the single tautological clause `x ∨ ¬x` on the target issue, so it still
/// counts as one satisfied clause.
pub fn dnf_to_cnf(formula: &DnfFormula, k: usize) -> Result<Vec<Clause>> {
    if k > MAX_INDEGREE_CAP {
        return Err(CmsError::Precondition(format!(
            "in-degree {k} above the conversion cap {MAX_INDEGREE_CAP}"
        )));
    }
    let nv = formula.vars.len();
    if nv > k + 1 {
        return Err(CmsError::Precondition(format!(
            "formula has {nv} variables, expected at most {}",
            k + 1
        )));
    }
    let prov = formula.provenance;
    let target_pos = formula
        .vars
        .iter()
        .position(|&v| v == prov.issue)
        .ok_or_else(|| CmsError::Precondition("target issue missing from formula variables".into()))?;

    let table = formula.truth_table();
    if table.iter().all(|&b| !b) {
        return Ok(Vec::new());
    }
    if table.iter().all(|&b| b) {
        return Ok(vec![Clause::new(
            [Literal::pos(prov.issue), Literal::neg(prov.issue)],
            prov,
        )]);
    }

    // A clause is a pair of bit masks over `vars`: positive and negative literals.
    type Mask = (usize, usize);
    let falsifies = |(pos, neg): Mask, row: usize| row & pos == 0 && !row & neg == 0;
    let implied = |c: Mask| (0..table.len()).all(|r| !falsifies(c, r) || !table[r]);

    let dep_positions: Vec<usize> = (0..nv).filter(|&b| b != target_pos).collect();
    let mut clauses: Vec<Mask> = Vec::new();
    for t in 0..1usize << dep_positions.len() {
        let mut row = 0usize;
        for (i, &b) in dep_positions.iter().enumerate() {
            row |= (t >> i & 1) << b;
        }
        let f0 = table[row];
        let f1 = table[row | 1 << target_pos];
        if f0 && f1 {
            continue;
        }
        // literals false exactly on this dependency assignment
        let mut pos = 0usize;
        let mut neg = 0usize;
        for &b in &dep_positions {
            if row >> b & 1 == 1 {
                neg |= 1 << b;
            } else {
                pos |= 1 << b;
            }
        }
        match (f0, f1) {
            (false, false) => {}
            (false, true) => pos |= 1 << target_pos,
            (true, false) => neg |= 1 << target_pos,
            (true, true) => unreachable!(),
        }
        clauses.push((pos, neg));
    }

    // shrink each clause to a prime implicate, in variable order
    for c in clauses.iter_mut() {
        for b in 0..nv {
            let bit = 1usize << b;
            for drop_neg in [false, true] {
                let cand = if drop_neg {
                    (c.0, c.1 & !bit)
                } else {
                    (c.0 & !bit, c.1)
                };
                if cand != *c && implied(cand) {
                    *c = cand;
                }
            }
        }
    }
    let mut unique: Vec<Mask> = Vec::new();
    for c in clauses {
        if !unique.contains(&c) {
            unique.push(c);
        }
    }
    let equivalent = |cs: &[Mask]| (0..table.len()).all(|r| cs.iter().all(|&c| !falsifies(c, r)) == table[r]);
    let mut i = 0;
    while i < unique.len() {
        let mut rest = unique.clone();
        rest.remove(i);
        if equivalent(&rest) {
            unique = rest;
        } else {
            i += 1;
        }
    }

    Ok(unique
        .into_iter()
        .map(|(pos, neg)| {
            let lits = (0..nv).flat_map(|b| {
                let v = formula.vars[b];
                let p = (pos >> b & 1 == 1).then(|| Literal::pos(v));
                let n = (neg >> b & 1 == 1).then(|| Literal::neg(v));
                p.into_iter().chain(n)
            });
            Clause::new(lits, prov)
        })
        .collect())
}

/// Builds the MIN SAT instance: the multiset union of every voter's
/// per-issue CNF, with a weight-`w` voter contributing `w` copies.
pub fn reduce(profile: &Profile, indegree_cap: usize) -> Result<CnfInstance> {
    ensure_valid(profile)?;
    let cap = indegree_cap.min(MAX_INDEGREE_CAP);
    let mut clauses = Vec::new();
    for (vi, ballot) in profile.voters().iter().enumerate() {
        for entry in &ballot.entries {
            let k = entry.indegree();
            if k > cap {
                return Err(CmsError::InDegreeCap {
                    voter: vi,
                    issue: entry.issue,
                    indegree: k,
                    cap,
                });
            }
            let cnf = dnf_to_cnf(&entry_dnf(vi, entry), k)?;
            for _ in 0..ballot.weight {
                clauses.extend(cnf.iter().cloned());
            }
        }
    }
    Ok(CnfInstance {
        num_vars: profile.m(),
        clauses,
    })
}
