#![allow(dead_code)]

use cms_core::{generate, GenParams, Outcome, Profile, Topology};

pub const TREEWIDTH_TWO: [Topology; 4] = [
    Topology::Path,
    Topology::Tree,
    Topology::Cycle,
    Topology::SeriesParallel,
];

/// Small profile derived from `seed`, sized to keep brute force cheap.
pub fn small(seed: u64, topology: Topology, k: usize, max_n: usize, max_m: usize) -> Profile {
    let min_m = if topology == Topology::Cycle { 3 } else { 1 };
    let m = min_m + (seed as usize * 7 + 3) % (max_m - min_m + 1);
    let n = 1 + (seed as usize * 5 + 1) % max_n;
    let density = [0.3, 0.5, 0.7, 0.9][(seed % 4) as usize];
    generate(&GenParams {
        seed,
        n,
        m,
        k,
        topology,
        density,
    })
    .unwrap()
}

/// Cheapest outcome by direct evaluation of every assignment.
pub fn naive_opt(p: &Profile) -> u64 {
    Outcome::enumerate(p.m())
        .map(|o| cms_core::total_cost(p, &o).unwrap())
        .min()
        .unwrap()
}
