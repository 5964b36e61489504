//! Seeded random profiles.
//!
//! The generator draws from xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`). Only two derived draws are used,
//! both trivially portable:
//!
//! * `below(n)` = `next_u64() % n`
//! * `chance(p)` = `(next_u64() >> 11) as f64 * 2^-53 < p`
//!
//! A global topology graph is built first. Every topology edge is then
//! offered, in order and in a random orientation, to the voters starting
//! from a random one until a voter can take it without exceeding in-degree
//! `k` or closing a directed cycle. Afterwards each voter takes each further
//! edge with probability 1/2 under the same constraints. Finally every
//! possible approval statement of every entry is included with probability
//! `density`.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{CmsError, Result};
use crate::profile::{ApprovalStatement, BallotEntry, Condition, ConditionalBallot, IssueId, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Each pair of issues linked independently with probability 0.3.
    Random,
    Path,
    /// Random recursive tree: issue `i > 0` hangs off a uniform earlier issue.
    Tree,
    Cycle,
    /// Grown from one edge by random series subdivisions and parallel
    /// additions, so treewidth stays at most two.
    SeriesParallel,
}

impl Topology {
    pub const ALL: [Topology; 5] = [
        Topology::Random,
        Topology::Path,
        Topology::Tree,
        Topology::Cycle,
        Topology::SeriesParallel,
    ];

    fn is_forest(self) -> bool {
        matches!(self, Topology::Path | Topology::Tree)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Random => "random",
            Topology::Path => "path",
            Topology::Tree => "tree",
            Topology::Cycle => "cycle",
            Topology::SeriesParallel => "series-parallel",
        })
    }
}

impl FromStr for Topology {
    type Err = CmsError;

    fn from_str(s: &str) -> Result<Self> {
        Topology::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| CmsError::Generator(format!("unknown topology '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    /// Per-voter in-degree bound.
    pub k: usize,
    pub topology: Topology,
    /// Probability of including each possible approval statement.
    pub density: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            n: 3,
            m: 5,
            k: 1,
            topology: Topology::Path,
            density: 0.5,
        }
    }
}

struct Draw(Xoshiro256StarStar);

impl Draw {
    fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    fn chance(&mut self, p: f64) -> bool {
        ((self.0.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }
}

fn topology_edges(t: Topology, m: usize, draw: &mut Draw) -> Result<Vec<(IssueId, IssueId)>> {
    Ok(match t {
        Topology::Path => (1..m).map(|i| (i - 1, i)).collect(),
        Topology::Tree => (1..m).map(|i| (draw.below(i), i)).collect(),
        Topology::Cycle => {
            if m < 3 {
                return Err(CmsError::Generator(format!("a cycle needs m ≥ 3, got {m}")));
            }
            let mut e: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
            e.push((0, m - 1));
            e
        }
        Topology::Random => {
            let mut e = Vec::new();
            for a in 0..m {
                for b in (a + 1)..m {
                    if draw.chance(0.3) {
                        e.push((a, b));
                    }
                }
            }
            e
        }
        Topology::SeriesParallel => {
            if m < 2 {
                return Ok(Vec::new());
            }
            let mut e = vec![(0, 1)];
            for v in 2..m {
                let i = draw.below(e.len());
                let (a, b) = e[i];
                if draw.chance(0.5) {
                    e[i] = (a, v);
                    e.push((v, b));
                } else {
                    e.push((a, v));
                    e.push((v, b));
                }
            }
            e
        }
    })
}

struct VoterGraph {
    deps: Vec<Vec<IssueId>>,
    out: Vec<Vec<IssueId>>,
}

impl VoterGraph {
    fn new(m: usize) -> Self {
        VoterGraph {
            deps: vec![Vec::new(); m],
            out: vec![Vec::new(); m],
        }
    }

    fn linked(&self, a: IssueId, b: IssueId) -> bool {
        self.deps[b].contains(&a) || self.deps[a].contains(&b)
    }

    fn reaches(&self, from: IssueId, to: IssueId) -> bool {
        let mut seen = vec![false; self.out.len()];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            if !std::mem::replace(&mut seen[u], true) {
                stack.extend(&self.out[u]);
            }
        }
        false
    }

    fn try_add(&mut self, a: IssueId, b: IssueId, k: usize, acyclic_for_free: bool) -> bool {
        if self.deps[b].len() >= k || self.linked(a, b) {
            return false;
        }
        if !acyclic_for_free && self.reaches(b, a) {
            return false;
        }
        self.deps[b].push(a);
        self.out[a].push(b);
        true
    }
}

pub fn generate(params: &GenParams) -> Result<Profile> {
    let GenParams {
        seed,
        n,
        m,
        k,
        topology,
        density,
    } = *params;
    if n == 0 || m == 0 {
        return Err(CmsError::Generator("n and m must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(CmsError::Generator(format!("density {density} outside [0, 1]")));
    }
    if k > crate::minsat::MAX_INDEGREE_CAP {
        return Err(CmsError::Generator(format!(
            "k = {k} above the supported maximum {}",
            crate::minsat::MAX_INDEGREE_CAP
        )));
    }
    let mut draw = Draw(Xoshiro256StarStar::seed_from_u64(seed));
    let edges = topology_edges(topology, m, &mut draw)?;
    let forest = topology.is_forest();
    let mut graphs: Vec<VoterGraph> = (0..n).map(|_| VoterGraph::new(m)).collect();

    if k > 0 {
        for &(u, v) in &edges {
            let first = draw.below(n);
            let flip = draw.chance(0.5);
            'place: for t in 0..n {
                let g = &mut graphs[(first + t) % n];
                for orient in [flip, !flip] {
                    let (a, b) = if orient { (v, u) } else { (u, v) };
                    if g.try_add(a, b, k, forest) {
                        break 'place;
                    }
                }
            }
        }
        for g in graphs.iter_mut() {
            for &(u, v) in &edges {
                if draw.chance(0.5) {
                    let (a, b) = if draw.chance(0.5) { (v, u) } else { (u, v) };
                    g.try_add(a, b, k, forest);
                }
            }
        }
    }

    let voters = graphs
        .into_iter()
        .enumerate()
        .map(|(vi, mut g)| {
            let entries = (0..m)
                .map(|j| {
                    let mut deps = std::mem::take(&mut g.deps[j]);
                    deps.sort_unstable();
                    let mut statements = Vec::new();
                    for t in 0..1usize << deps.len() {
                        let when =
                            Condition::new(deps.iter().enumerate().map(|(b, &d)| (d, t >> b & 1 == 1)))
                                .expect("distinct dependencies");
                        for value in [false, true] {
                            if draw.chance(density) {
                                statements.push(ApprovalStatement::new(when.clone(), value));
                            }
                        }
                    }
                    BallotEntry {
                        issue: j,
                        depends_on: deps,
                        statements,
                    }
                })
                .collect();
            ConditionalBallot::new(entries).with_name(format!("v{vi}"))
        })
        .collect();
    Profile::with_anonymous_issues(m, voters)
}
