//! Global dependency graph: the union of every voter's dependency edges.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::profile::{IssueId, Profile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalGraph {
    directed: BTreeSet<(IssueId, IssueId)>,
    neighbors: Vec<BTreeSet<IssueId>>,
}

impl GlobalGraph {
    pub fn from_edges(m: usize, edges: impl IntoIterator<Item = (IssueId, IssueId)>) -> Self {
        let directed: BTreeSet<_> = edges.into_iter().collect();
        let mut neighbors = vec![BTreeSet::new(); m];
        for &(a, b) in &directed {
            if a != b && a < m && b < m {
                neighbors[a].insert(b);
                neighbors[b].insert(a);
            }
        }
        GlobalGraph { directed, neighbors }
    }

    pub fn num_issues(&self) -> usize {
        self.neighbors.len()
    }

    pub fn directed_edges(&self) -> &BTreeSet<(IssueId, IssueId)> {
        &self.directed
    }

    pub fn has_edge(&self, from: IssueId, to: IssueId) -> bool {
        self.directed.contains(&(from, to))
    }

    /// Undirected edges `(u, v)` with `u < v`; anti-parallel pairs merge.
    pub fn undirected_edges(&self) -> Vec<(IssueId, IssueId)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn neighbors(&self, v: IssueId) -> &BTreeSet<IssueId> {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: IssueId) -> usize {
        self.neighbors[v].len()
    }
}

pub fn global_graph(profile: &Profile) -> GlobalGraph {
    GlobalGraph::from_edges(profile.m(), profile.voters().iter().flat_map(|b| b.edges()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndegreeReport {
    pub per_voter: Vec<usize>,
    pub overall: usize,
}

/// Per-voter maximum in-degree Δ_i and the overall maximum.
pub fn max_indegree(profile: &Profile) -> IndegreeReport {
    let per_voter: Vec<usize> = profile.voters().iter().map(|b| b.max_indegree()).collect();
    let overall = per_voter.iter().copied().max().unwrap_or(0);
    IndegreeReport { per_voter, overall }
}
