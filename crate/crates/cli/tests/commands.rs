use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cms_core::fixtures::COAUTHORS_JSON;
use serde_json::Value;
use tempfile::TempDir;

fn cms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cms"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn coauthors(dir: &TempDir) -> String {
    write(dir.path(), "coauthors.json", COAUTHORS_JSON)
}

#[test]
fn brute_solves_the_coauthor_election() {
    let d = TempDir::new().unwrap();
    let o = cms(&["solve", "--input", &coauthors(&d), "--method", "brute"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "{\"cost\":1,\"method\":\"brute\",\"outcome\":{\"coauthor\":false,\"multiple\":true,\"work\":true},\"stats\":{\"explored\":8}}\n"
    );
}

#[test]
fn elimination_rejects_indegree_two() {
    let d = TempDir::new().unwrap();
    let o = cms(&["solve", "--input", &coauthors(&d), "--method", "elim"]);
    assert_eq!(code(&o), 2);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "unsupported");
}

#[test]
fn unconditional_profile_is_eliminated() {
    let d = TempDir::new().unwrap();
    let gen = cms(&["gen", "--seed", "4", "--n", "4", "--m", "7", "--k", "0"]);
    let p = write(d.path(), "p.json", std::str::from_utf8(&gen.stdout).unwrap());
    let e = stdout_json(&cms(&["solve", "-i", &p, "--method", "elim", "--trace"]));
    let b = stdout_json(&cms(&["solve", "-i", &p, "--method", "brute"]));
    assert_eq!(e["cost"], b["cost"]);
    assert!(e["trace"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["case"] == "isolated"));
}

#[test]
fn eval_reproduces_table_columns() {
    let d = TempDir::new().unwrap();
    let p = coauthors(&d);
    for (outcome, per_voter, total) in [
        (r#"{"work":true,"multiple":true,"coauthor":true}"#, [1, 2, 0], 3),
        (r#"{"work":false,"multiple":true,"coauthor":true}"#, [3, 1, 1], 5),
    ] {
        let o = write(d.path(), "o.json", outcome);
        let v = stdout_json(&cms(&["eval", "-i", &p, "--outcome", &o]));
        assert_eq!(v["per_voter"], serde_json::json!(per_voter));
        assert_eq!(v["total"], total);
    }
    let missing = write(d.path(), "m.json", r#"{"work":true,"multiple":true}"#);
    assert_eq!(code(&cms(&["evaluate", "-i", &p, "--outcome", &missing])), 1);
}

#[test]
fn input_errors_exit_one() {
    let d = TempDir::new().unwrap();
    let syntax = write(d.path(), "s.json", "{\"issues\": [\"a\"],\n \"voters\": [");
    let o = cms(&["solve", "-i", &syntax]);
    assert_eq!(code(&o), 1);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "syntax");
    assert!(err["error"]["message"].as_str().unwrap().contains("line 2"));

    let schema = write(d.path(), "k.json", r#"{"issues":[],"voters":[]}"#);
    let o = cms(&["check", "-i", &schema]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("m ≥ 1 required"));

    assert_eq!(code(&cms(&["solve", "--no-such-flag"])), 1);
    assert_eq!(code(&cms(&["gen", "--topology", "cycle", "--m", "2"])), 1);
}

#[test]
fn check_reports_violations() {
    let d = TempDir::new().unwrap();
    let bad = write(
        d.path(),
        "bad.json",
        r#"{"issues":["a","b"],"voters":[{"ballots":[
            {"issue":"a","depends_on":["a"],"approve":[{"when":{"a":true},"value":true}]},
            {"issue":"b","depends_on":[],"approve":[]}]}]}"#,
    );
    let o = cms(&["validate", "-i", &bad]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], false);
    let kinds: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["self_loop", "empty_approval"]);
    assert_eq!(code(&cms(&["solve", "-i", &bad, "--method", "brute"])), 1);
}

#[test]
fn size_and_cap_limits() {
    let d = TempDir::new().unwrap();
    let p = coauthors(&d);
    assert_eq!(
        code(&cms(&[
            "solve",
            "-i",
            &p,
            "--method",
            "brute",
            "--brute-limit",
            "2"
        ])),
        3
    );
    assert_eq!(code(&cms(&["reduce", "-i", &p, "--indegree-cap", "1"])), 2);
    assert_eq!(
        code(&cms(&[
            "solve",
            "-i",
            &p,
            "--method",
            "minsat",
            "--indegree-cap",
            "1"
        ])),
        2
    );
    // auto falls back to brute force when the cap rules out minsat
    let v = stdout_json(&cms(&["solve", "-i", &p, "--indegree-cap", "1"]));
    assert_eq!(v["method"], "brute");
}

#[test]
fn generated_profiles_pass_check() {
    let d = TempDir::new().unwrap();
    for (seed, topology, k) in [
        (1, "random", 2),
        (2, "tree", 1),
        (3, "series-parallel", 1),
        (4, "cycle", 3),
    ] {
        let g = cms(&[
            "generate",
            "--seed",
            &seed.to_string(),
            "--n",
            "4",
            "--m",
            "9",
            "--k",
            &k.to_string(),
            "--topology",
            topology,
        ]);
        assert_eq!(code(&g), 0);
        let p = write(d.path(), "g.json", std::str::from_utf8(&g.stdout).unwrap());
        assert_eq!(code(&cms(&["check", "-i", &p])), 0, "{topology}");
    }
}

#[test]
fn reduce_then_external_assignment() {
    let d = TempDir::new().unwrap();
    let p = coauthors(&d);
    let r = cms(&["reduce", "-i", &p]);
    let dimacs = String::from_utf8(r.stdout).unwrap();
    assert!(dimacs.starts_with("p cnf 3 "));
    let a = write(d.path(), "a.txt", "s OPTIMUM FOUND\nv 1 2 -3 0\n");
    let v = stdout_json(&cms(&[
        "solve",
        "-i",
        &p,
        "--method",
        "minsat",
        "--assignment",
        &a,
    ]));
    assert_eq!(v["cost"], 1);
    assert_eq!(v["outcome"]["coauthor"], false);
    assert!(v["satisfied_clauses"].as_u64().unwrap() >= 1);
    assert_eq!(
        code(&cms(&[
            "solve",
            "-i",
            &p,
            "--method",
            "brute",
            "--assignment",
            &a
        ])),
        1
    );
}

#[test]
fn batch_directory_is_ordered_and_parallel_safe() {
    let d = TempDir::new().unwrap();
    for seed in 0..12 {
        let g = cms(&[
            "gen",
            "--seed",
            &seed.to_string(),
            "--m",
            "8",
            "--topology",
            "tree",
        ]);
        write(
            d.path(),
            &format!("p{seed:02}.json"),
            std::str::from_utf8(&g.stdout).unwrap(),
        );
    }
    write(d.path(), "zz-broken.json", "{");
    write(d.path(), "notes.txt", "ignored");
    let dir = d.path().to_str().unwrap();
    let one = cms(&["solve", "-i", dir, "--jobs", "1"]);
    let four = cms(&["solve", "-i", dir, "--jobs", "4"]);
    assert_eq!(code(&one), 1);
    assert_eq!(one.stdout, four.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    let files: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["file"].as_str().unwrap())
        .collect();
    assert_eq!(files.len(), 13);
    assert_eq!(files[0], "p00.json");
    assert_eq!(files[12], "zz-broken.json");
    assert_eq!(v[12]["error"]["kind"], "syntax");
    assert_eq!(v[0]["method"], "elim");
}

#[test]
fn output_flag_and_stdin() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_cms"))
        .args([
            "solve",
            "-i",
            "-",
            "--method",
            "brute",
            "-o",
            out.to_str().unwrap(),
        ])
        .stdin(fs::File::open(coauthors(&d)).unwrap())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["cost"], 1);
}

#[test]
fn timing_is_opt_in() {
    let d = TempDir::new().unwrap();
    let p = coauthors(&d);
    let plain = stdout_json(&cms(&["solve", "-i", &p, "--method", "brute"]));
    assert!(plain["stats"].get("elapsed_ms").is_none());
    let timed = stdout_json(&cms(&["solve", "-i", &p, "--method", "brute", "--timing"]));
    assert!(timed["stats"]["elapsed_ms"].is_number());
}
