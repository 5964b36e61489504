use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::profile::{IssueId, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ViolationKind {
    ZeroWeight,
    IssueOutOfRange {
        issue: IssueId,
    },
    DuplicateEntry,
    MissingEntry,
    SelfLoop,
    DependencyOutOfRange {
        dependency: IssueId,
    },
    DuplicateDependency {
        dependency: IssueId,
    },
    ConditionKeysMismatch {
        statement: usize,
    },
    DuplicateStatement {
        statement: usize,
    },
    TooManyStatements {
        count: usize,
        max: usize,
    },
    /// Nothing approved: the voter is dissatisfied with the issue under
    /// every outcome. Allowed, but reported.
    EmptyApproval,
}

/// A single invariant violation, located by voter index and issue id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub severity: Severity,
    pub voter: usize,
    pub issue: Option<IssueId>,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl Violation {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}: voter {}", self.voter)?;
        if let Some(i) = self.issue {
            write!(f, ", issue {i}")?;
        }
        match &self.kind {
            ViolationKind::ZeroWeight => write!(f, ": weight must be positive"),
            ViolationKind::IssueOutOfRange { issue } => write!(f, ": entry issue {issue} out of range"),
            ViolationKind::DuplicateEntry => write!(f, ": more than one entry for this issue"),
            ViolationKind::MissingEntry => write!(f, ": no entry for this issue"),
            ViolationKind::SelfLoop => write!(f, ": issue depends on itself"),
            ViolationKind::DependencyOutOfRange { dependency } => {
                write!(f, ": dependency {dependency} out of range")
            }
            ViolationKind::DuplicateDependency { dependency } => {
                write!(f, ": dependency {dependency} listed twice")
            }
            ViolationKind::ConditionKeysMismatch { statement } => {
                write!(f, ": statement {statement} condition keys differ from depends_on")
            }
            ViolationKind::DuplicateStatement { statement } => {
                write!(f, ": statement {statement} is a duplicate")
            }
            ViolationKind::TooManyStatements { count, max } => {
                write!(f, ": {count} statements, at most {max} possible")
            }
            ViolationKind::EmptyApproval => write!(f, ": no value approved under any condition"),
        }
    }
}

/// Checks every ballot invariant. Violations are returned as data; the
/// profile is usable by the solvers iff no violation has error severity.
pub fn validate(profile: &Profile) -> Vec<Violation> {
    let m = profile.m();
    let mut out = Vec::new();
    for (vi, ballot) in profile.voters().iter().enumerate() {
        let mut push = |severity, issue, kind| {
            out.push(Violation {
                severity,
                voter: vi,
                issue,
                kind,
            })
        };
        if ballot.weight == 0 {
            push(Severity::Error, None, ViolationKind::ZeroWeight);
        }
        let mut covered = vec![false; m];
        for entry in &ballot.entries {
            let j = entry.issue;
            if j >= m {
                push(Severity::Error, None, ViolationKind::IssueOutOfRange { issue: j });
                continue;
            }
            if covered[j] {
                push(Severity::Error, Some(j), ViolationKind::DuplicateEntry);
            }
            covered[j] = true;

            let mut deps = HashSet::new();
            for &k in &entry.depends_on {
                if k == j {
                    push(Severity::Error, Some(j), ViolationKind::SelfLoop);
                } else if k >= m {
                    push(
                        Severity::Error,
                        Some(j),
                        ViolationKind::DependencyOutOfRange { dependency: k },
                    );
                }
                if !deps.insert(k) {
                    push(
                        Severity::Error,
                        Some(j),
                        ViolationKind::DuplicateDependency { dependency: k },
                    );
                }
            }

            let mut seen = HashSet::new();
            for (si, st) in entry.statements.iter().enumerate() {
                let keys: HashSet<IssueId> = st.when.keys().collect();
                if keys != deps || st.when.bindings().len() != deps.len() {
                    push(
                        Severity::Error,
                        Some(j),
                        ViolationKind::ConditionKeysMismatch { statement: si },
                    );
                }
                if !seen.insert(st) {
                    push(
                        Severity::Error,
                        Some(j),
                        ViolationKind::DuplicateStatement { statement: si },
                    );
                }
            }
            let max = 1usize.checked_shl(deps.len() as u32 + 1).unwrap_or(usize::MAX);
            if entry.statements.len() > max {
                push(
                    Severity::Error,
                    Some(j),
                    ViolationKind::TooManyStatements {
                        count: entry.statements.len(),
                        max,
                    },
                );
            }
            if entry.statements.is_empty() {
                push(Severity::Warning, Some(j), ViolationKind::EmptyApproval);
            }
        }
        for (j, c) in covered.iter().enumerate() {
            if !c {
                push(Severity::Error, Some(j), ViolationKind::MissingEntry);
            }
        }
    }
    out
}

/// Error-severity violations only.
pub fn errors(profile: &Profile) -> Vec<Violation> {
    validate(profile)
        .into_iter()
        .filter(Violation::is_error)
        .collect()
}

pub(crate) fn ensure_valid(profile: &Profile) -> crate::Result<()> {
    let errs = errors(profile);
    if errs.is_empty() {
        Ok(())
    } else {
        Err(crate::CmsError::InvalidProfile(errs))
    }
}
