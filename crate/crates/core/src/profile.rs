//! Conditional approval profiles.
//!
//! Issues are binary. The value `true` stands for the issue's positive
//! alternative and `false` for its negation; names only matter at the I/O
//! boundary.

use std::collections::HashSet;

use crate::error::{CmsError, Result};

/// Dense issue index in `0..m`.
pub type IssueId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub id: IssueId,
    pub name: String,
}

/// Assignment of values to the in-neighbours of a ballot entry.
///
/// Bindings are kept sorted by issue id. The empty condition is the
/// unconditional case.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    bindings: Vec<(IssueId, bool)>,
}

impl Condition {
    pub fn unconditional() -> Self {
        Condition::default()
    }

    /// Builds a condition from `(issue, value)` pairs. Returns `None` when
    /// the same issue is bound twice.
    pub fn new(bindings: impl IntoIterator<Item = (IssueId, bool)>) -> Option<Self> {
        let mut bindings: Vec<_> = bindings.into_iter().collect();
        bindings.sort_unstable();
        if bindings.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(Condition { bindings })
    }

    /// Binds `deps[i]` to `values[i]`.
    pub fn from_parts(deps: &[IssueId], values: &[bool]) -> Option<Self> {
        assert_eq!(deps.len(), values.len(), "dependency/value length mismatch");
        Condition::new(deps.iter().copied().zip(values.iter().copied()))
    }

    pub fn bindings(&self) -> &[(IssueId, bool)] {
        &self.bindings
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, issue: IssueId) -> Option<bool> {
        self.bindings
            .binary_search_by_key(&issue, |b| b.0)
            .ok()
            .map(|i| self.bindings[i].1)
    }

    pub fn keys(&self) -> impl Iterator<Item = IssueId> + '_ {
        self.bindings.iter().map(|b| b.0)
    }

    /// True when every binding agrees with `values` (indexed by issue id).
    pub fn matches(&self, values: &[bool]) -> bool {
        self.bindings
            .iter()
            .all(|&(k, v)| values.get(k).copied() == Some(v))
    }
}

/// One `{t : d}` statement: the voter is satisfied with the target issue
/// when its in-neighbours realise `when` and the issue takes `value`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApprovalStatement {
    pub when: Condition,
    pub value: bool,
}

impl ApprovalStatement {
    pub fn new(when: Condition, value: bool) -> Self {
        ApprovalStatement { when, value }
    }
}

/// A voter's approval statements for one issue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallotEntry {
    pub issue: IssueId,
    pub depends_on: Vec<IssueId>,
    pub statements: Vec<ApprovalStatement>,
}

impl BallotEntry {
    /// Unconditional entry approving exactly the listed values.
    pub fn unconditional(issue: IssueId, approve: &[bool]) -> Self {
        BallotEntry {
            issue,
            depends_on: Vec::new(),
            statements: approve
                .iter()
                .map(|&v| ApprovalStatement::new(Condition::unconditional(), v))
                .collect(),
        }
    }

    /// Unconditional entry approving both values.
    pub fn full_approval(issue: IssueId) -> Self {
        BallotEntry::unconditional(issue, &[false, true])
    }

    /// Conditional entry. Each statement is `(values of depends_on, value)`.
    ///
    /// # Panics
    /// If `depends_on` repeats an issue or a statement's value list has the
    /// wrong length.
    pub fn conditional(issue: IssueId, depends_on: &[IssueId], statements: &[(&[bool], bool)]) -> Self {
        BallotEntry {
            issue,
            depends_on: depends_on.to_vec(),
            statements: statements
                .iter()
                .map(|(t, v)| {
                    let when = Condition::from_parts(depends_on, t).expect("repeated dependency");
                    ApprovalStatement::new(when, *v)
                })
                .collect(),
        }
    }

    pub fn indegree(&self) -> usize {
        self.depends_on.len()
    }

    /// Whether the voter is satisfied with this issue under `values`.
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        let Some(&own) = values.get(self.issue) else {
            return false;
        };
        self.statements
            .iter()
            .any(|s| s.value == own && s.when.matches(values))
    }

    pub(crate) fn canonicalize(&mut self) {
        self.statements.sort();
    }
}

/// One voter's conditional approval ballot with an integer multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalBallot {
    pub name: Option<String>,
    pub weight: u64,
    pub entries: Vec<BallotEntry>,
}

impl ConditionalBallot {
    pub fn new(entries: Vec<BallotEntry>) -> Self {
        ConditionalBallot {
            name: None,
            weight: 1,
            entries,
        }
    }

    pub fn with_weight(mut self, weight: u64) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Ballot approving every value of each of the `m` issues.
    pub fn full_approval(m: usize) -> Self {
        ConditionalBallot::new((0..m).map(BallotEntry::full_approval).collect())
    }

    pub fn entry(&self, issue: IssueId) -> Option<&BallotEntry> {
        match self.entries.binary_search_by_key(&issue, |e| e.issue) {
            Ok(i) => Some(&self.entries[i]),
            Err(_) => self.entries.iter().find(|e| e.issue == issue),
        }
    }

    /// Largest in-degree over this voter's entries.
    pub fn max_indegree(&self) -> usize {
        self.entries.iter().map(BallotEntry::indegree).max().unwrap_or(0)
    }

    /// Directed edges `(dependency, target)` of this voter's dependency graph.
    pub fn edges(&self) -> impl Iterator<Item = (IssueId, IssueId)> + '_ {
        self.entries
            .iter()
            .flat_map(|e| e.depends_on.iter().map(move |&k| (k, e.issue)))
    }
}

/// An election instance: issues plus the voters' ballots.
///
/// A profile is immutable once built. Entries are stored sorted by issue id
/// and statements in canonical order, so equal profiles compare equal
/// regardless of input order. Semantic invariants of the ballots are checked
/// by [`crate::validate`], not here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    issues: Vec<Issue>,
    voters: Vec<ConditionalBallot>,
}

impl Profile {
    pub fn new<S: Into<String>>(
        issue_names: impl IntoIterator<Item = S>,
        voters: Vec<ConditionalBallot>,
    ) -> Result<Self> {
        let issues: Vec<Issue> = issue_names
            .into_iter()
            .enumerate()
            .map(|(id, n)| Issue { id, name: n.into() })
            .collect();
        if issues.is_empty() {
            return Err(CmsError::schema("$.issues", "m ≥ 1 required"));
        }
        if voters.is_empty() {
            return Err(CmsError::schema("$.voters", "n ≥ 1 required"));
        }
        let mut seen = HashSet::new();
        for issue in &issues {
            if issue.name.is_empty() {
                return Err(CmsError::schema(
                    format!("$.issues[{}]", issue.id),
                    "issue name must be nonempty",
                ));
            }
            if !seen.insert(issue.name.as_str()) {
                return Err(CmsError::schema(
                    format!("$.issues[{}]", issue.id),
                    format!("duplicate issue name '{}'", issue.name),
                ));
            }
        }
        let voters = voters
            .into_iter()
            .map(|mut b| {
                b.entries.sort_by_key(|e| e.issue);
                b.entries.iter_mut().for_each(BallotEntry::canonicalize);
                b
            })
            .collect();
        Ok(Profile { issues, voters })
    }

    /// Profile with anonymous issues named `i0`, `i1`, ...
    pub fn with_anonymous_issues(m: usize, voters: Vec<ConditionalBallot>) -> Result<Self> {
        Profile::new((0..m).map(|i| format!("i{i}")), voters)
    }

    pub fn issues(&self) -> &[Issue] {
        &self.issues
    }

    pub fn voters(&self) -> &[ConditionalBallot] {
        &self.voters
    }

    /// Number of issues.
    pub fn m(&self) -> usize {
        self.issues.len()
    }

    /// Number of ballots (not weighted).
    pub fn n(&self) -> usize {
        self.voters.len()
    }

    /// Sum of voter weights.
    pub fn total_weight(&self) -> u64 {
        self.voters.iter().map(|v| v.weight).sum()
    }

    pub fn issue_id(&self, name: &str) -> Option<IssueId> {
        self.issues.iter().position(|i| i.name == name)
    }

    pub fn issue_name(&self, id: IssueId) -> &str {
        &self.issues[id].name
    }
}

/// A total assignment of values to issues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<bool>);

impl Outcome {
    pub fn new(values: Vec<bool>) -> Self {
        Outcome(values)
    }

    pub fn all_false(m: usize) -> Self {
        Outcome(vec![false; m])
    }

    /// Decodes the low `m` bits of `mask`, bit `i` holding issue `i`.
    pub fn from_mask(mask: u64, m: usize) -> Self {
        Outcome((0..m).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, issue: IssueId) -> bool {
        self.0[issue]
    }

    pub fn into_values(self) -> Vec<bool> {
        self.0
    }

    /// Every outcome on `m` issues in lexicographic order (issue 0 first,
    /// `false` before `true`).
    pub fn enumerate(m: usize) -> impl Iterator<Item = Outcome> {
        assert!(m < 64, "too many issues to enumerate");
        (0u64..1 << m).map(move |k| Outcome((0..m).map(|i| k >> (m - 1 - i) & 1 == 1).collect()))
    }
}

impl From<Vec<bool>> for Outcome {
    fn from(v: Vec<bool>) -> Self {
        Outcome(v)
    }
}
