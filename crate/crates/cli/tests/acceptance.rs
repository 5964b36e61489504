//! Acceptance gate. Each test prints one `[PASS]` or `[FAIL]` line; run with
//! `cargo test -p cms-cli --test acceptance -- --nocapture`.

use std::fs;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use cms_core::elim::eliminate;
use cms_core::fixtures::{coauthors, COAUTHORS_JSON};
use cms_core::json::{parse_outcome, serialize_outcome, serialize_profile_compact};
use cms_core::minsat::{build_cij, dnf_to_cnf, minsat_exact, reduce};
use cms_core::{
    dissatisfaction, generate, global_graph, solve_elimination, solve_exhaustive, solve_via_minsat,
    total_cost, BallotEntry, ConditionalBallot, EliminationCase, GenParams, Outcome, Profile, Topology,
};
use serde_json::Value;
use tempfile::TempDir;

const TREEWIDTH_TWO: [Topology; 4] = [
    Topology::Path,
    Topology::Tree,
    Topology::Cycle,
    Topology::SeriesParallel,
];

fn verdict(n: u32, what: &str, started: Instant, limit: Option<Duration>, result: Result<String, String>) {
    let elapsed = started.elapsed();
    let result = match (result, limit) {
        (Ok(_), Some(l)) if elapsed >= l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        (r, _) => r,
    };
    match result {
        Ok(detail) => println!("[PASS] criterion {n}: {what}: {detail} ({elapsed:.2?})"),
        Err(why) => {
            println!("[FAIL] criterion {n}: {what}: {why} ({elapsed:.2?})");
            panic!("criterion {n} failed: {why}");
        }
    }
}

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn cms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cms"))
        .args(args)
        .output()
        .unwrap()
}

/// Instance `seed` of the small-instance family: n ≤ `max_n`, m ≤ `max_m`.
fn instance(seed: u64, topology: Topology, k: usize, max_n: usize, max_m: usize) -> Profile {
    let min_m = if topology == Topology::Cycle { 3 } else { 1 };
    generate(&GenParams {
        seed,
        n: 1 + (seed as usize * 5 + 1) % max_n,
        m: min_m + (seed as usize * 7 + 3) % (max_m - min_m + 1),
        k,
        topology,
        density: [0.3, 0.5, 0.7, 0.9][(seed % 4) as usize],
    })
    .unwrap()
}

fn oracle_family() -> impl Iterator<Item = (u64, Profile)> {
    (0..1000u64).map(|seed| (seed, instance(seed, TREEWIDTH_TWO[(seed % 4) as usize], 1, 8, 10)))
}

fn brute_opt(p: &Profile) -> u64 {
    solve_exhaustive(p, 24).unwrap().cost
}

#[test]
fn criterion_1_coauthor_golden() {
    let start = Instant::now();
    let r = (|| {
        // columns: wmc, wmc̄, wm̄c, wm̄c̄, w̄mc, w̄mc̄, w̄m̄c, w̄m̄c̄
        let table = [
            [1, 0, 1, 2, 3, 2, 1, 2],
            [2, 1, 1, 2, 1, 0, 1, 0],
            [0, 0, 1, 1, 1, 1, 3, 2],
        ];
        let p = coauthors();
        let mut cells = 0;
        for (v, row) in table.iter().enumerate() {
            for (c, &want) in row.iter().enumerate() {
                let o = Outcome::new(vec![c & 4 == 0, c & 2 == 0, c & 1 == 0]);
                let got = dissatisfaction(&p.voters()[v], &o).map_err(|e| e.to_string())?;
                check(got == want, || {
                    format!("voter {} column {c}: {got} != {want}", v + 1)
                })?;
                cells += 1;
            }
        }
        let d = TempDir::new().unwrap();
        let f = d.path().join("coauthors.json");
        fs::write(&f, COAUTHORS_JSON).unwrap();
        let o = cms(&["solve", "--input", f.to_str().unwrap(), "--method", "brute"]);
        let v: Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
        check(o.status.success(), || "solve failed".into())?;
        check(v["cost"] == 1, || format!("cost {}", v["cost"]))?;
        let want = serde_json::json!({"work": true, "multiple": true, "coauthor": false});
        check(v["outcome"] == want, || format!("outcome {}", v["outcome"]))?;
        Ok(format!("{cells} cells exact, brute → (T,T,F) cost 1"))
    })();
    verdict(
        1,
        "coauthor election golden",
        start,
        Some(Duration::from_secs(1)),
        r,
    );
}

#[test]
fn criterion_2_elimination_matches_oracle() {
    let start = Instant::now();
    let r = (|| {
        let mut count = 0;
        for (seed, p) in oracle_family() {
            let e = solve_elimination(&p).map_err(|e| format!("seed {seed}: {e}"))?;
            let b = solve_exhaustive(&p, 24).unwrap();
            check(e.cost == b.cost, || {
                format!("seed {seed}: elim {} vs brute {}", e.cost, b.cost)
            })?;
            count += 1;
        }
        Ok(format!("{count} instances, costs equal"))
    })();
    verdict(
        2,
        "elimination = exhaustive",
        start,
        Some(Duration::from_secs(60)),
        r,
    );
}

#[test]
fn criterion_3_clause_formula_truth() {
    let start = Instant::now();
    let r = (|| {
        let mut checks = 0u64;
        for seed in 0..600u64 {
            let p = instance(
                seed,
                Topology::ALL[(seed % 5) as usize],
                (seed % 3) as usize,
                5,
                8,
            );
            let outcomes: Vec<Outcome> = Outcome::enumerate(p.m()).collect();
            for (vi, b) in p.voters().iter().enumerate() {
                for j in 0..p.m() {
                    let dnf = build_cij(vi, b, j).map_err(|e| e.to_string())?;
                    let entry = b.entry(j).unwrap();
                    for o in &outcomes {
                        let truth = dnf.eval(o.values());
                        check(truth == !entry.is_satisfied_by(o.values()), || {
                            format!("seed {seed} voter {vi} issue {j} outcome {:?}", o.values())
                        })?;
                        checks += 1;
                    }
                }
                // the per-issue truths sum to the voter's dissatisfaction
                for o in &outcomes {
                    let sum = (0..p.m())
                        .filter(|&j| build_cij(vi, b, j).unwrap().eval(o.values()))
                        .count() as u32;
                    check(sum == dissatisfaction(b, o).unwrap(), || {
                        format!("seed {seed} voter {vi}")
                    })?;
                }
            }
        }
        Ok(format!("600 profiles, {checks} (voter, issue, outcome) checks"))
    })();
    verdict(
        3,
        "formula truth = dissatisfaction",
        start,
        Some(Duration::from_secs(60)),
        r,
    );
}

/// Ballot whose entry on issue `k` depends on issues `0..k` and approves the
/// combinations selected by `mask` (bit `2t + v`: condition `t`, value `v`).
fn entry_ballot(k: usize, mask: u64) -> ConditionalBallot {
    let deps: Vec<usize> = (0..k).collect();
    let conds: Vec<Vec<bool>> = (0..1usize << k)
        .map(|t| (0..k).map(|b| t >> b & 1 == 1).collect())
        .collect();
    let statements: Vec<(&[bool], bool)> = (0..2usize << k)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (conds[i >> 1].as_slice(), i & 1 == 1))
        .collect();
    let mut entries: Vec<BallotEntry> = (0..k).map(BallotEntry::full_approval).collect();
    entries.push(BallotEntry::conditional(k, &deps, &statements));
    ConditionalBallot::new(entries)
}

#[test]
fn criterion_4_conversion_shape() {
    let start = Instant::now();
    let r = (|| {
        let mut conversions = 0u64;
        let mut worst = [(0usize, 0usize); 5];
        for (k, widest_seen) in worst.iter_mut().enumerate() {
            let combos = 2u64 << k;
            // every statement set for k ≤ 3, a deterministic stride through them for k = 4
            let masks: Box<dyn Iterator<Item = u64>> = if k <= 3 {
                Box::new(0..1u64 << combos)
            } else {
                Box::new((0..20_000u64).map(|i| i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> (64 - combos)))
            };
            for mask in masks {
                let ballot = entry_ballot(k, mask);
                let dnf = build_cij(0, &ballot, k).map_err(|e| e.to_string())?;
                let cnf = dnf_to_cnf(&dnf, k).map_err(|e| e.to_string())?;
                let vars_per_clause = |c: &cms_core::minsat::Clause| {
                    let mut v: Vec<usize> = c.literals().iter().map(|l| l.var).collect();
                    v.dedup();
                    v.len()
                };
                let widest = cnf.iter().map(vars_per_clause).max().unwrap_or(0);
                check(cnf.len() <= 1 << k, || {
                    format!("k={k} mask {mask:#x}: {} clauses", cnf.len())
                })?;
                check(widest <= k + 1, || {
                    format!("k={k} mask {mask:#x}: clause over {widest} variables")
                })?;
                check(cnf.iter().all(|c| c.len() <= k + 1 || c.is_tautology()), || {
                    format!("k={k} mask {mask:#x}: oversized clause")
                })?;
                *widest_seen = (widest_seen.0.max(cnf.len()), widest_seen.1.max(widest));
                for row in 0..1usize << (k + 1) {
                    let a: Vec<bool> = (0..=k).map(|b| row >> b & 1 == 1).collect();
                    let f = dnf.eval(&a);
                    let g = !cnf.is_empty() && cnf.iter().all(|c| c.is_satisfied(&a));
                    // an unsatisfiable DNF converts to no clauses at all
                    let g = if dnf.is_empty() {
                        false
                    } else {
                        g || cnf.is_empty()
                    };
                    check(f == g, || format!("k={k} mask {mask:#x}: row {row} differs"))?;
                }
                conversions += 1;
            }
        }
        let shape: Vec<String> = worst
            .iter()
            .enumerate()
            .map(|(k, (c, l))| format!("k={k}: ≤{c} clauses/≤{l} vars"))
            .collect();
        Ok(format!("{conversions} conversions; {}", shape.join(", ")))
    })();
    verdict(4, "DNF→CNF shape and equivalence", start, None, r);
}

#[test]
fn criterion_5_approximation_chain() {
    let start = Instant::now();
    let r = (|| {
        let (mut instances, mut outcomes, mut dense) = (0, 0u64, 0);
        for (seed, p) in oracle_family() {
            let inst = reduce(&p, 10).map_err(|e| e.to_string())?;
            for o in Outcome::enumerate(p.m()) {
                let (c, s) = (total_cost(&p, &o).unwrap(), inst.satisfied_count(o.values()));
                check(c <= s, || format!("seed {seed}: cost {c} > satisfied {s}"))?;
                outcomes += 1;
            }
            let sol = solve_via_minsat(&p, 10).map_err(|e| e.to_string())?;
            let sat = sol.satisfied_clauses.unwrap();
            let opt_sat = minsat_exact(&inst, 20).map_err(|e| e.to_string())?.satisfied;
            check(sol.cost <= sat, || {
                format!("seed {seed}: SOL(P) {} > SOL(P') {sat}", sol.cost)
            })?;
            check(sat <= 2 * opt_sat, || {
                format!("seed {seed}: SOL(P') {sat} > 2·{opt_sat}")
            })?;
            let opt = brute_opt(&p);
            let nm = p.total_weight() * p.m() as u64;
            // ρ = 4
            if 4 * opt >= nm {
                check(sol.cost <= 10 * opt, || {
                    format!("seed {seed}: {} > 10·{opt}", sol.cost)
                })?;
                dense += 1;
            }
            instances += 1;
        }
        Ok(format!(
            "{instances} instances, {outcomes} outcomes (all of them); ratio bound checked on {dense} with OPT ≥ nm/4"
        ))
    })();
    verdict(
        5,
        "approximation chain, factor 2",
        start,
        Some(Duration::from_secs(120)),
        r,
    );
}

#[test]
fn criterion_6_elimination_preserves_optimum() {
    let start = Instant::now();
    let r = (|| {
        let mut steps = [0usize; 3];
        let mut instances = 0;
        for seed in 0..300u64 {
            let t = Topology::ALL[(seed % 5) as usize];
            let p = instance(seed, t, usize::from(seed % 6 != 0), 6, 8);
            if p.m() < 2 || p.voters().iter().any(|b| b.max_indegree() > 1) {
                continue;
            }
            let g = global_graph(&p);
            let opt = brute_opt(&p);
            let mut done = [false; 3];
            for y in 0..p.m() {
                let d = g.degree(y);
                if d > 2 || done[d] {
                    continue;
                }
                let (q, step) = eliminate(&p, y).map_err(|e| format!("seed {seed} issue {y}: {e}"))?;
                let reduced = brute_opt(&q);
                check(reduced + step.y_cost == opt, || {
                    format!(
                        "seed {seed} issue {y} {:?}: {reduced} + {} != {opt}",
                        step.case, step.y_cost
                    )
                })?;
                done[d] = true;
                steps[match step.case {
                    EliminationCase::Isolated => 0,
                    EliminationCase::Pendant => 1,
                    EliminationCase::Degree2 => 2,
                }] += 1;
            }
            instances += 1;
        }
        check(instances >= 200, || format!("only {instances} instances"))?;
        check(steps.iter().all(|&s| s > 0), || {
            format!("case coverage {steps:?}")
        })?;
        Ok(format!(
            "{instances} instances; isolated {}, pendant {}, degree-2 {} steps",
            steps[0], steps[1], steps[2]
        ))
    })();
    verdict(6, "cost preservation per step", start, None, r);
}

#[test]
fn criterion_7_scale() {
    let start = Instant::now();
    let r = (|| {
        let p = generate(&GenParams {
            seed: 7,
            n: 50,
            m: 10_000,
            k: 1,
            topology: Topology::Path,
            density: 0.5,
        })
        .map_err(|e| e.to_string())?;
        let t = Instant::now();
        let sol = solve_elimination(&p).map_err(|e| e.to_string())?;
        let solve_time = t.elapsed();
        check(solve_time < Duration::from_secs(5), || {
            format!("elimination took {solve_time:.2?}")
        })?;

        let d = TempDir::new().unwrap();
        let pf = d.path().join("big.json");
        let of = d.path().join("outcome.json");
        fs::write(&pf, serialize_profile_compact(&p)).unwrap();
        fs::write(&of, serialize_outcome(&p, &sol.outcome)).unwrap();
        let e = cms(&[
            "eval",
            "-i",
            pf.to_str().unwrap(),
            "--outcome",
            of.to_str().unwrap(),
        ]);
        check(e.status.success(), || {
            String::from_utf8_lossy(&e.stderr).into_owned()
        })?;
        let v: Value = serde_json::from_slice(&e.stdout).unwrap();
        check(v["total"] == sol.cost, || {
            format!("eval {} vs solve {}", v["total"], sol.cost)
        })?;

        let s = cms(&["solve", "-i", pf.to_str().unwrap(), "--method", "elim"]);
        check(s.status.success(), || {
            String::from_utf8_lossy(&s.stderr).into_owned()
        })?;
        let v: Value = serde_json::from_slice(&s.stdout).unwrap();
        check(v["cost"] == sol.cost, || {
            format!("cli cost {} vs {}", v["cost"], sol.cost)
        })?;
        let back = parse_outcome(&v["outcome"].to_string(), &p).map_err(|e| e.to_string())?;
        check(total_cost(&p, &back).unwrap() == sol.cost, || {
            "cli outcome cost differs".into()
        })?;
        Ok(format!(
            "m=10000 n=50 solved in {solve_time:.2?}, cost {} confirmed by eval",
            sol.cost
        ))
    })();
    verdict(7, "path m=10000, n=50", start, None, r);
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let r = (|| {
        let d = TempDir::new().unwrap();
        let path = |n: &str| d.path().join(n).to_str().unwrap().to_owned();
        fs::write(path("coauthors.json"), COAUTHORS_JSON).unwrap();
        fs::create_dir(path("batch")).unwrap();
        for (i, t) in ["path", "tree", "cycle", "series-parallel", "random"]
            .iter()
            .enumerate()
        {
            let g = cms(&[
                "gen",
                "--seed",
                &i.to_string(),
                "--n",
                "4",
                "--m",
                "9",
                "--topology",
                t,
            ]);
            fs::write(d.path().join("batch").join(format!("{t}.json")), &g.stdout).unwrap();
        }
        fs::write(
            path("batch/k2.json"),
            &cms(&[
                "gen",
                "--seed",
                "9",
                "--m",
                "8",
                "--k",
                "2",
                "--topology",
                "random",
            ])
            .stdout,
        )
        .unwrap();
        fs::write(
            path("o.json"),
            r#"{"work":false,"multiple":true,"coauthor":false}"#,
        )
        .unwrap();
        fs::write(path("a.txt"), "v -1 2 3 0\n").unwrap();
        let (c, t, b, o, a) = (
            path("coauthors.json"),
            path("batch/tree.json"),
            path("batch"),
            path("o.json"),
            path("a.txt"),
        );
        let runs: Vec<Vec<&str>> = vec![
            vec![
                "gen",
                "--seed",
                "1",
                "--n",
                "3",
                "--m",
                "5",
                "--k",
                "1",
                "--topology",
                "path",
                "--density",
                "0.5",
            ],
            vec![
                "gen",
                "--seed",
                "42",
                "--n",
                "6",
                "--m",
                "12",
                "--k",
                "2",
                "--topology",
                "random",
                "--pretty",
            ],
            vec!["solve", "-i", &c],
            vec!["solve", "-i", &c, "--method", "brute", "--pretty"],
            vec!["solve", "-i", &c, "--method", "minsat"],
            vec!["solve", "-i", &c, "--method", "minsat", "--assignment", &a],
            vec!["solve", "-i", &c, "--method", "elim"],
            vec!["solve", "-i", &t, "--method", "elim", "--trace"],
            vec!["solve", "-i", &t, "--method", "elim", "--trace", "--pretty"],
            vec!["solve", "-i", &b, "--jobs", "4"],
            vec!["solve", "-i", &b, "--jobs", "2", "--pretty"],
            vec!["eval", "-i", &c, "--outcome", &o],
            vec!["eval", "-i", &c, "--outcome", &o, "--pretty"],
            vec!["reduce", "-i", &c],
            vec!["reduce", "-i", &t],
            vec!["check", "-i", &c],
            vec!["check", "-i", &t, "--pretty"],
        ];
        for args in &runs {
            let (x, y) = (cms(args), cms(args));
            check(
                x.status.code() == y.status.code() && x.stdout == y.stdout && x.stderr == y.stderr,
                || format!("`cms {}` differs between runs", args.join(" ")),
            )?;
            check(!x.stdout.is_empty() || !x.stderr.is_empty(), || {
                format!("`cms {}` printed nothing", args.join(" "))
            })?;
        }
        Ok(format!(
            "{} command lines byte-identical across two runs",
            runs.len()
        ))
    })();
    verdict(8, "determinism", start, None, r);
}
