//! JSON documents and `--pretty` tables for command output.

use std::fmt::Write;

use cms_core::json::outcome_value;
use cms_core::{Profile, SolveResult, Violation};
use serde_json::{json, Map, Value};

pub fn solve_value(profile: &Profile, r: &SolveResult, trace: bool, timing: bool) -> Value {
    let mut stats = Map::new();
    stats.insert("explored".into(), r.stats.explored.into());
    if timing {
        stats.insert("elapsed_ms".into(), json!(r.stats.elapsed.as_secs_f64() * 1e3));
    }
    let mut v = Map::new();
    v.insert("method".into(), r.method.to_string().into());
    v.insert("outcome".into(), outcome_value(profile, &r.outcome));
    v.insert("cost".into(), r.cost.into());
    if let Some(s) = r.satisfied_clauses {
        v.insert("satisfied_clauses".into(), s.into());
    }
    v.insert("stats".into(), Value::Object(stats));
    if let (true, Some(steps)) = (trace, &r.trace) {
        v.insert(
            "trace".into(),
            serde_json::to_value(steps).expect("steps serialise"),
        );
    }
    Value::Object(v)
}

fn flag(b: bool) -> &'static str {
    if b {
        "T"
    } else {
        "F"
    }
}

pub fn solve_table(profile: &Profile, r: &SolveResult, trace: bool, timing: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "method    {}", r.method);
    let _ = writeln!(s, "cost      {}", r.cost);
    if let Some(c) = r.satisfied_clauses {
        let _ = writeln!(s, "clauses   {c} satisfied");
    }
    let _ = writeln!(s, "explored  {}", r.stats.explored);
    if timing {
        let _ = writeln!(s, "elapsed   {:.3} ms", r.stats.elapsed.as_secs_f64() * 1e3);
    }
    let width = profile.issues().iter().map(|i| i.name.len()).max().unwrap_or(0);
    let _ = writeln!(s, "outcome");
    for (i, &b) in r.outcome.values().iter().enumerate() {
        let _ = writeln!(s, "  {:width$}  {b}", profile.issue_name(i));
    }
    if let (true, Some(steps)) = (trace, &r.trace) {
        let _ = writeln!(s, "trace");
        for st in steps {
            let nb: Vec<&str> = st.neighbors.iter().map(|&n| profile.issue_name(n)).collect();
            let choice: String = st.choice.iter().map(|&c| flag(c)).collect();
            let costs: Vec<String> = st.costs.iter().map(u64::to_string).collect();
            let _ = writeln!(
                s,
                "  {:width$}  {:?} [{}] choice {choice} c* {}",
                profile.issue_name(st.issue),
                st.case,
                nb.join(", "),
                costs.join("/"),
            );
        }
    }
    s
}

pub fn eval_table(profile: &Profile, per_voter: &[u32], total: u64) -> String {
    let names: Vec<String> = profile
        .voters()
        .iter()
        .enumerate()
        .map(|(i, b)| b.name.clone().unwrap_or_else(|| format!("#{i}")))
        .collect();
    let width = names.iter().map(String::len).max().unwrap_or(0).max(5);
    let mut s = format!("{:width$}  weight  dissatisfaction\n", "voter");
    for ((name, b), d) in names.iter().zip(profile.voters()).zip(per_voter) {
        let _ = writeln!(s, "{name:width$}  {:>6}  {d:>15}", b.weight);
    }
    let _ = writeln!(s, "{:width$}  {:>6}  {total:>15}", "total", "");
    s
}

pub fn check_output(violations: &[Violation], pretty: bool) -> String {
    let valid = !violations.iter().any(Violation::is_error);
    if pretty {
        let mut s = String::from(if valid { "valid\n" } else { "invalid\n" });
        for v in violations {
            let _ = writeln!(s, "  {v}");
        }
        s
    } else {
        let mut s = json!({ "valid": valid, "violations": violations }).to_string();
        s.push('\n');
        s
    }
}
