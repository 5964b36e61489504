//! Exact solving by vertex elimination on the global dependency graph.
//!
//! Applies to profiles where every voter's in-degree is at most one. An
//! issue `y` with at most two neighbours `x`, `z` in the undirected global
//! graph can be removed: its best value depends only on the values of `x`
//! and `z`, and the minimum cost it contributes is pushed onto the
//! neighbours as weighted synthetic voters (a unary cost on `x` for one
//! neighbour, a pairwise cost on `(x, z)` for two). Repeating this while the
//! graph has treewidth at most two leaves at most three issues, which are
//! solved directly, and the recorded argmin tables assign the rest.
//!
//! [`eliminate_isolated`], [`eliminate_pendant`] and [`eliminate_degree2`]
//! perform one step on a [`Profile`] and return the reduced profile.
//! [`solve_elimination`] runs the same arithmetic on a compact cost network
//! so that long chains stay near-linear.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::error::{CmsError, Result};
use crate::eval::total_cost;
use crate::graph::{global_graph, GlobalGraph};
use crate::profile::{BallotEntry, ConditionalBallot, IssueId, Outcome, Profile};
use crate::solve::{Method, SolveResult, SolveStats};
use crate::validate::ensure_valid;

/// `c(y_v)`: weight of voters with an unconditional entry on `y` who are
/// dissatisfied when `y = v`. Indexed by `v as usize`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct UnaryCost(pub [u64; 2]);

impl UnaryCost {
    pub fn get(&self, v: bool) -> u64 {
        self.0[usize::from(v)]
    }
}

/// `c(a_i, b_j)` for a directed edge `(a, b)`: weight of voters whose entry
/// on `b` depends on `a` alone and who are dissatisfied with `b` under
/// `(a = i, b = j)`. Indexed by `2 * i + j`; all zeros when no voter has
/// the edge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairCost(pub [u64; 4]);

impl PairCost {
    pub fn get(&self, from: bool, to: bool) -> u64 {
        self.0[2 * usize::from(from) + usize::from(to)]
    }

    fn add(&mut self, other: &PairCost) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }
}

fn entry_unary_misses(entry: &BallotEntry) -> [bool; 2] {
    [false, true].map(|v| !entry.statements.iter().any(|s| s.value == v))
}

fn entry_pair_misses(entry: &BallotEntry, from: IssueId) -> [bool; 4] {
    let mut miss = [true; 4];
    for s in &entry.statements {
        if let Some(a) = s.when.get(from) {
            miss[2 * usize::from(a) + usize::from(s.value)] = false;
        }
    }
    miss
}

pub fn unary_cost(profile: &Profile, y: IssueId) -> UnaryCost {
    let mut c = UnaryCost::default();
    for b in profile.voters() {
        if let Some(e) = b.entry(y).filter(|e| e.depends_on.is_empty()) {
            for (slot, miss) in c.0.iter_mut().zip(entry_unary_misses(e)) {
                if miss {
                    *slot += b.weight;
                }
            }
        }
    }
    c
}

pub fn pair_cost(profile: &Profile, from: IssueId, to: IssueId) -> PairCost {
    let mut c = PairCost::default();
    for b in profile.voters() {
        if let Some(e) = b.entry(to).filter(|e| e.depends_on == [from]) {
            for (slot, miss) in c.0.iter_mut().zip(entry_pair_misses(e, from)) {
                if miss {
                    *slot += b.weight;
                }
            }
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EliminationCase {
    Isolated,
    Pendant,
    Degree2,
}

/// One elimination, kept for backtracking.
///
/// Tables are indexed by the neighbours' values with `neighbors[0]` as the
/// most significant position: one entry for an isolated issue, `x` for a
/// pendant one, `2 * x + z` for two neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub issue: IssueId,
    pub case: EliminationCase,
    pub neighbors: Vec<IssueId>,
    /// Best value of the eliminated issue.
    pub choice: Vec<bool>,
    /// Minimum cost the eliminated issue contributes (`c*`).
    pub costs: Vec<u64>,
    /// Entries where both values reach the minimum; `false` was chosen.
    pub ties: Vec<bool>,
    /// Cost not carried into the reduced profile: the optimum of an
    /// isolated issue, zero otherwise.
    pub y_cost: u64,
}

impl EliminationStep {
    pub fn value_for(&self, neighbor_values: &[bool]) -> bool {
        let idx = neighbor_values
            .iter()
            .fold(0usize, |acc, &v| acc << 1 | usize::from(v));
        self.choice[idx]
    }
}

/// Minimises the eliminated issue's cost for every assignment of its
/// neighbours. `links[b]` holds the tables for edges `(nb_b, y)` and
/// `(y, nb_b)`.
fn local_minimum(
    issue: IssueId,
    neighbors: Vec<IssueId>,
    unary: UnaryCost,
    links: &[(PairCost, PairCost)],
) -> EliminationStep {
    let d = links.len();
    let mut choice = Vec::with_capacity(1 << d);
    let mut costs = Vec::with_capacity(1 << d);
    let mut ties = Vec::with_capacity(1 << d);
    for idx in 0..1usize << d {
        let cost_of = |yv: bool| {
            let mut c = unary.get(yv);
            for (b, (into_y, from_y)) in links.iter().enumerate() {
                let nv = idx >> (d - 1 - b) & 1 == 1;
                c += into_y.get(nv, yv) + from_y.get(yv, nv);
            }
            c
        };
        let (c0, c1) = (cost_of(false), cost_of(true));
        choice.push(c1 < c0);
        costs.push(c0.min(c1));
        ties.push(c0 == c1);
    }
    let case = match d {
        0 => EliminationCase::Isolated,
        1 => EliminationCase::Pendant,
        _ => EliminationCase::Degree2,
    };
    let y_cost = if d == 0 { costs[0] } else { 0 };
    EliminationStep {
        issue,
        case,
        neighbors,
        choice,
        costs,
        ties,
        y_cost,
    }
}

fn check_indegree(profile: &Profile) -> Result<()> {
    for (vi, b) in profile.voters().iter().enumerate() {
        let d = b.max_indegree();
        if d > 1 {
            let who = b.name.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
            return Err(CmsError::Unsupported(format!(
                "voter {vi}{who} has in-degree {d}; elimination requires at most 1"
            )));
        }
    }
    Ok(())
}

fn precheck(profile: &Profile, y: IssueId, degree: usize) -> Result<GlobalGraph> {
    ensure_valid(profile)?;
    check_indegree(profile)?;
    if y >= profile.m() {
        return Err(CmsError::Precondition(format!("issue {y} out of range")));
    }
    let g = global_graph(profile);
    if g.degree(y) != degree {
        return Err(CmsError::Precondition(format!(
            "issue {y} has {} neighbours, expected {degree}",
            g.degree(y)
        )));
    }
    if profile.m() < 2 {
        return Err(CmsError::Precondition("cannot eliminate the only issue".into()));
    }
    Ok(g)
}

fn step_on_profile(profile: &Profile, y: IssueId, degree: usize) -> Result<(Profile, EliminationStep)> {
    let g = precheck(profile, y, degree)?;
    let neighbors: Vec<IssueId> = g.neighbors(y).iter().copied().collect();
    let links: Vec<_> = neighbors
        .iter()
        .map(|&n| (pair_cost(profile, n, y), pair_cost(profile, y, n)))
        .collect();
    let step = local_minimum(y, neighbors, unary_cost(profile, y), &links);

    let remap = |id: IssueId| if id > y { id - 1 } else { id };
    let m2 = profile.m() - 1;
    let mut voters: Vec<ConditionalBallot> = profile
        .voters()
        .iter()
        .map(|b| {
            let entries = b
                .entries
                .iter()
                .filter(|e| e.issue != y)
                .map(|e| {
                    if e.depends_on.contains(&y) {
                        BallotEntry::full_approval(remap(e.issue))
                    } else {
                        let mut e = e.clone();
                        e.issue = remap(e.issue);
                        e.depends_on.iter_mut().for_each(|d| *d = remap(*d));
                        for s in &mut e.statements {
                            s.when = crate::profile::Condition::new(
                                s.when.bindings().iter().map(|&(k, v)| (remap(k), v)),
                            )
                            .expect("remapping preserves distinct keys");
                        }
                        e
                    }
                })
                .collect();
            ConditionalBallot {
                name: b.name.clone(),
                weight: b.weight,
                entries,
            }
        })
        .collect();

    let yname = profile.issue_name(y);
    match step.case {
        EliminationCase::Isolated => {}
        EliminationCase::Pendant => {
            let x = step.neighbors[0];
            for (i, &c) in step.costs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let xi = i == 1;
                let mut b = ConditionalBallot::full_approval(m2);
                b.entries[remap(x)] = BallotEntry::unconditional(remap(x), &[!xi]);
                voters.push(
                    b.with_weight(c)
                        .with_name(format!("elim:{yname}:{}", u8::from(xi))),
                );
            }
        }
        EliminationCase::Degree2 => {
            let (x, z) = (step.neighbors[0], step.neighbors[1]);
            for (idx, &c) in step.costs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (xi, zj) = (idx >> 1 == 1, idx & 1 == 1);
                let mut statements: Vec<(&[bool], bool)> = Vec::with_capacity(3);
                for a in [false, true] {
                    for v in [false, true] {
                        if (a, v) != (xi, zj) {
                            statements.push((if a { &[true] } else { &[false] }, v));
                        }
                    }
                }
                let mut b = ConditionalBallot::full_approval(m2);
                b.entries[remap(z)] = BallotEntry::conditional(remap(z), &[remap(x)], &statements);
                voters.push(b.with_weight(c).with_name(format!(
                    "elim:{yname}:{}{}",
                    u8::from(xi),
                    u8::from(zj)
                )));
            }
        }
    }

    let names = profile
        .issues()
        .iter()
        .filter(|i| i.id != y)
        .map(|i| i.name.clone());
    Ok((Profile::new(names, voters)?, step))
}

/// Removes an issue with no neighbours. Issues after `y` shift down by one
/// in the returned profile; ids in the step refer to the input profile.
pub fn eliminate_isolated(profile: &Profile, y: IssueId) -> Result<(Profile, EliminationStep)> {
    step_on_profile(profile, y, 0)
}

/// Removes an issue with exactly one neighbour `x`. Entries on `x` that
/// depended on `y` become fully approving; for each value of `x` with a
/// positive `c*` one synthetic voter of that weight rejects just that value.
pub fn eliminate_pendant(profile: &Profile, y: IssueId) -> Result<(Profile, EliminationStep)> {
    step_on_profile(profile, y, 1)
}

/// Removes an issue with neighbours `x < z`. Entries on `x` or `z` that
/// depended on `y` become fully approving; for each `(x_i, z_j)` with a
/// positive `c*` one synthetic voter of that weight, whose entry on `z`
/// depends on `x`, rejects just that combination.
pub fn eliminate_degree2(profile: &Profile, y: IssueId) -> Result<(Profile, EliminationStep)> {
    step_on_profile(profile, y, 2)
}

/// Dispatches on the degree of `y`.
pub fn eliminate(profile: &Profile, y: IssueId) -> Result<(Profile, EliminationStep)> {
    let d = if y < profile.m() {
        global_graph(profile).degree(y)
    } else {
        0
    };
    match d {
        0 => eliminate_isolated(profile, y),
        1 => eliminate_pendant(profile, y),
        2 => eliminate_degree2(profile, y),
        _ => Err(CmsError::Precondition(format!(
            "issue {y} has {d} neighbours, at most 2 can be eliminated"
        ))),
    }
}

/// Unary and pairwise costs over the still-present issues. Synthetic voters
/// are folded straight into these tables.
struct CostNetwork {
    unary: Vec<UnaryCost>,
    pairs: HashMap<(IssueId, IssueId), PairCost>,
    adj: Vec<BTreeSet<IssueId>>,
    alive: Vec<bool>,
    remaining: usize,
}

impl CostNetwork {
    fn new(profile: &Profile) -> Self {
        let m = profile.m();
        let mut net = CostNetwork {
            unary: vec![UnaryCost::default(); m],
            pairs: HashMap::new(),
            adj: vec![BTreeSet::new(); m],
            alive: vec![true; m],
            remaining: m,
        };
        for b in profile.voters() {
            for e in &b.entries {
                match e.depends_on.as_slice() {
                    [] => {
                        for (slot, miss) in net.unary[e.issue].0.iter_mut().zip(entry_unary_misses(e)) {
                            if miss {
                                *slot += b.weight;
                            }
                        }
                    }
                    &[k] => {
                        let t = net.pairs.entry((k, e.issue)).or_default();
                        for (slot, miss) in t.0.iter_mut().zip(entry_pair_misses(e, k)) {
                            if miss {
                                *slot += b.weight;
                            }
                        }
                        net.adj[k].insert(e.issue);
                        net.adj[e.issue].insert(k);
                    }
                    _ => unreachable!("in-degree checked before building the network"),
                }
            }
        }
        net
    }

    fn eliminate(&mut self, y: IssueId) -> EliminationStep {
        let neighbors: Vec<IssueId> = self.adj[y].iter().copied().collect();
        debug_assert!(neighbors.len() <= 2);
        let links: Vec<_> = neighbors
            .iter()
            .map(|&n| {
                (
                    self.pairs.remove(&(n, y)).unwrap_or_default(),
                    self.pairs.remove(&(y, n)).unwrap_or_default(),
                )
            })
            .collect();
        let step = local_minimum(y, neighbors.clone(), self.unary[y], &links);
        for &n in &neighbors {
            self.adj[n].remove(&y);
        }
        self.adj[y].clear();
        self.alive[y] = false;
        self.remaining -= 1;

        match neighbors.as_slice() {
            [] => {}
            &[x] => {
                for (slot, c) in self.unary[x].0.iter_mut().zip(&step.costs) {
                    *slot += c;
                }
            }
            &[x, z] => {
                if step.costs.iter().any(|&c| c > 0) {
                    let add = PairCost([step.costs[0], step.costs[1], step.costs[2], step.costs[3]]);
                    self.pairs.entry((x, z)).or_default().add(&add);
                    self.adj[x].insert(z);
                    self.adj[z].insert(x);
                }
            }
            _ => unreachable!(),
        }
        step
    }

    /// Exhaustive minimum over the remaining issues, lexicographic ties.
    fn solve_rest(&self) -> Vec<(IssueId, bool)> {
        let rest: Vec<IssueId> = (0..self.alive.len()).filter(|&v| self.alive[v]).collect();
        let r = rest.len();
        let mut best: Option<(u64, u64)> = None;
        for bits in 0u64..1 << r {
            let val = |i: usize| bits >> (r - 1 - i) & 1 == 1;
            let mut c: u64 = (0..r).map(|i| self.unary[rest[i]].get(val(i))).sum();
            for i in 0..r {
                for j in 0..r {
                    if let Some(t) = self.pairs.get(&(rest[i], rest[j])) {
                        c += t.get(val(i), val(j));
                    }
                }
            }
            if best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, bits));
            }
        }
        let bits = best.map_or(0, |b| b.1);
        rest.iter()
            .enumerate()
            .map(|(i, &v)| (v, bits >> (r - 1 - i) & 1 == 1))
            .collect()
    }
}

/// Exact optimum for profiles with per-voter in-degree at most one whose
/// undirected global graph has treewidth at most two.
///
/// Always eliminates the lowest-id issue with at most two neighbours. Fails
/// with [`CmsError::TreewidthExceeded`] when more than three issues remain
/// and none qualifies. The trace lists the steps in elimination order.
pub fn solve_elimination(profile: &Profile) -> Result<SolveResult> {
    let start = Instant::now();
    ensure_valid(profile)?;
    check_indegree(profile)?;
    let m = profile.m();
    let mut net = CostNetwork::new(profile);
    let mut candidates: BTreeSet<IssueId> = (0..m).filter(|&v| net.adj[v].len() <= 2).collect();
    let mut steps = Vec::new();

    while net.remaining > 3 {
        let Some(y) = candidates.pop_first() else {
            return Err(CmsError::TreewidthExceeded {
                remaining: net.remaining,
            });
        };
        let step = net.eliminate(y);
        for &n in &step.neighbors {
            if net.adj[n].len() <= 2 {
                candidates.insert(n);
            } else {
                candidates.remove(&n);
            }
        }
        steps.push(step);
    }

    let mut values: Vec<Option<bool>> = vec![None; m];
    for (v, b) in net.solve_rest() {
        values[v] = Some(b);
    }
    for step in steps.iter().rev() {
        let nv: Vec<bool> = step
            .neighbors
            .iter()
            .map(|&n| values[n].expect("neighbours are assigned before the issue itself"))
            .collect();
        values[step.issue] = Some(step.value_for(&nv));
    }
    let outcome = Outcome::new(
        values
            .into_iter()
            .map(|v| v.expect("every issue assigned"))
            .collect(),
    );
    let cost = total_cost(profile, &outcome)?;
    Ok(SolveResult {
        outcome,
        cost,
        method: Method::Elim,
        stats: SolveStats {
            explored: steps.len() as u64,
            elapsed: start.elapsed(),
        },
        satisfied_clauses: None,
        trace: Some(steps),
    })
}
