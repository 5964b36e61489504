use thiserror::Error;

use crate::profile::IssueId;
use crate::validate::Violation;

pub type Result<T> = std::result::Result<T, CmsError>;

#[derive(Debug, Error)]
pub enum CmsError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid profile: {} violation(s), first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidProfile(Vec<Violation>),

    #[error("{what} has {size} issues/variables, above the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("voter {voter} has in-degree {indegree} on issue {issue}, above the cap of {cap}")]
    InDegreeCap {
        voter: usize,
        issue: IssueId,
        indegree: usize,
        cap: usize,
    },

    #[error("unsupported profile: {0}")]
    Unsupported(String),

    #[error("treewidth exceeds 2: no issue with at most two neighbours among {remaining} remaining issues")]
    TreewidthExceeded { remaining: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid generator parameters: {0}")]
    Generator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CmsError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CmsError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
