//! JSON encoding of profiles and outcomes.
//!
//! Profiles:
//!
//! ```json
//! { "issues": ["work", "multiple"],
//!   "voters": [
//!     { "name": "v1", "weight": 1,
//!       "ballots": [
//!         { "issue": "work", "depends_on": [], "approve": [ {"when": {}, "value": true} ] },
//!         { "issue": "multiple", "depends_on": ["work"],
//!           "approve": [ {"when": {"work": true}, "value": [true, false]} ] } ] } ] }
//! ```
//!
//! `name`, `weight` (default 1), `depends_on` (default `[]`) and `when`
//! (default `{}`) are optional. A `value` given as an array is shorthand for
//! one statement per listed value. Outcomes are objects mapping every issue
//! name to a boolean.
//!
//! Output is byte-stable: object keys are sorted, ballots follow issue id
//! order and statements are in canonical order.

use std::collections::HashMap;

use serde_json::{Map, Value};

use crate::error::{CmsError, Result};
use crate::profile::{
    ApprovalStatement, BallotEntry, Condition, ConditionalBallot, IssueId, Outcome, Profile,
};

fn syntax(e: serde_json::Error) -> CmsError {
    CmsError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn expect_object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| CmsError::schema(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CmsError::schema(format!("{path}.{k}"), "unknown key"));
    }
    Ok(obj)
}

fn expect_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| CmsError::schema(path, "expected an array"))
}

fn expect_bool(v: &Value, path: &str) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| CmsError::schema(path, "expected a boolean"))
}

struct IssueNames<'a>(HashMap<&'a str, IssueId>);

impl IssueNames<'_> {
    fn resolve(&self, v: &Value, path: &str) -> Result<IssueId> {
        let name = v
            .as_str()
            .ok_or_else(|| CmsError::schema(path, "expected an issue name"))?;
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| CmsError::schema(path, format!("unknown issue '{name}'")))
    }
}

pub fn parse_profile(text: &str) -> Result<Profile> {
    let root: Value = serde_json::from_str(text).map_err(syntax)?;
    let obj = expect_object(&root, "$", &["issues", "voters"])?;

    let issues_v = obj
        .get("issues")
        .ok_or_else(|| CmsError::schema("$.issues", "missing"))?;
    let mut ids = HashMap::new();
    let mut names = Vec::new();
    for (i, v) in expect_array(issues_v, "$.issues")?.iter().enumerate() {
        let path = format!("$.issues[{i}]");
        let name = v
            .as_str()
            .ok_or_else(|| CmsError::schema(&path, "expected a string"))?;
        if ids.insert(name, i).is_some() {
            return Err(CmsError::schema(path, format!("duplicate issue name '{name}'")));
        }
        names.push(name.to_owned());
    }
    if names.is_empty() {
        return Err(CmsError::schema("$.issues", "m ≥ 1 required"));
    }
    let issues = IssueNames(ids);

    let voters_v = obj
        .get("voters")
        .ok_or_else(|| CmsError::schema("$.voters", "missing"))?;
    let voters_a = expect_array(voters_v, "$.voters")?;
    if voters_a.is_empty() {
        return Err(CmsError::schema("$.voters", "n ≥ 1 required"));
    }
    let voters = voters_a
        .iter()
        .enumerate()
        .map(|(vi, v)| parse_voter(v, &format!("$.voters[{vi}]"), &issues))
        .collect::<Result<Vec<_>>>()?;

    Profile::new(names.iter().cloned(), voters)
}

fn parse_voter(v: &Value, path: &str, issues: &IssueNames) -> Result<ConditionalBallot> {
    let obj = expect_object(v, path, &["name", "weight", "ballots"])?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(CmsError::schema(format!("{path}.name"), "expected a string")),
    };
    let weight = match obj.get("weight") {
        None => 1,
        Some(w) => match w.as_u64() {
            Some(w) if w >= 1 => w,
            _ => {
                return Err(CmsError::schema(
                    format!("{path}.weight"),
                    "expected a positive integer",
                ))
            }
        },
    };
    let ballots_path = format!("{path}.ballots");
    let ballots = obj
        .get("ballots")
        .ok_or_else(|| CmsError::schema(&ballots_path, "missing"))?;
    let entries = expect_array(ballots, &ballots_path)?
        .iter()
        .enumerate()
        .map(|(bi, b)| parse_entry(b, &format!("{ballots_path}[{bi}]"), issues))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionalBallot {
        name,
        weight,
        entries,
    })
}

fn parse_entry(v: &Value, path: &str, issues: &IssueNames) -> Result<BallotEntry> {
    let obj = expect_object(v, path, &["issue", "depends_on", "approve"])?;
    let issue_path = format!("{path}.issue");
    let issue = issues.resolve(
        obj.get("issue")
            .ok_or_else(|| CmsError::schema(&issue_path, "missing"))?,
        &issue_path,
    )?;
    let depends_on = match obj.get("depends_on") {
        None => Vec::new(),
        Some(d) => {
            let dpath = format!("{path}.depends_on");
            expect_array(d, &dpath)?
                .iter()
                .enumerate()
                .map(|(i, x)| issues.resolve(x, &format!("{dpath}[{i}]")))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let apath = format!("{path}.approve");
    let approve = obj
        .get("approve")
        .ok_or_else(|| CmsError::schema(&apath, "missing"))?;
    let mut statements = Vec::new();
    for (si, s) in expect_array(approve, &apath)?.iter().enumerate() {
        let spath = format!("{apath}[{si}]");
        let sobj = expect_object(s, &spath, &["when", "value"])?;
        let when = match sobj.get("when") {
            None => Condition::unconditional(),
            Some(w) => {
                let wpath = format!("{spath}.when");
                let wobj = w
                    .as_object()
                    .ok_or_else(|| CmsError::schema(&wpath, "expected an object"))?;
                let bindings = wobj
                    .iter()
                    .map(|(k, b)| {
                        let kpath = format!("{wpath}.{k}");
                        let id = issues.resolve(&Value::String(k.clone()), &kpath)?;
                        Ok((id, expect_bool(b, &kpath)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Condition::new(bindings).expect("object keys are unique")
            }
        };
        let vpath = format!("{spath}.value");
        match sobj.get("value") {
            Some(Value::Bool(b)) => statements.push(ApprovalStatement::new(when, *b)),
            Some(Value::Array(vals)) => {
                for (i, b) in vals.iter().enumerate() {
                    let b = expect_bool(b, &format!("{vpath}[{i}]"))?;
                    statements.push(ApprovalStatement::new(when.clone(), b));
                }
            }
            Some(_) => return Err(CmsError::schema(vpath, "expected a boolean or array of booleans")),
            None => return Err(CmsError::schema(vpath, "missing")),
        }
    }
    Ok(BallotEntry {
        issue,
        depends_on,
        statements,
    })
}

fn profile_value(profile: &Profile) -> Value {
    let name = |id: IssueId| Value::String(profile.issue_name(id).to_owned());
    let voters: Vec<Value> = profile
        .voters()
        .iter()
        .map(|b| {
            let ballots: Vec<Value> = b
                .entries
                .iter()
                .map(|e| {
                    let approve: Vec<Value> = e
                        .statements
                        .iter()
                        .map(|s| {
                            let when: Map<String, Value> = s
                                .when
                                .bindings()
                                .iter()
                                .map(|&(k, v)| (profile.issue_name(k).to_owned(), Value::Bool(v)))
                                .collect();
                            let mut st = Map::new();
                            st.insert("value".into(), Value::Bool(s.value));
                            st.insert("when".into(), Value::Object(when));
                            Value::Object(st)
                        })
                        .collect();
                    let mut entry = Map::new();
                    entry.insert("approve".into(), Value::Array(approve));
                    entry.insert(
                        "depends_on".into(),
                        Value::Array(e.depends_on.iter().map(|&d| name(d)).collect()),
                    );
                    entry.insert("issue".into(), name(e.issue));
                    Value::Object(entry)
                })
                .collect();
            let mut voter = Map::new();
            voter.insert("ballots".into(), Value::Array(ballots));
            if let Some(n) = &b.name {
                voter.insert("name".into(), Value::String(n.clone()));
            }
            voter.insert("weight".into(), Value::from(b.weight));
            Value::Object(voter)
        })
        .collect();
    let mut root = Map::new();
    root.insert(
        "issues".into(),
        Value::Array(
            profile
                .issues()
                .iter()
                .map(|i| Value::String(i.name.clone()))
                .collect(),
        ),
    );
    root.insert("voters".into(), Value::Array(voters));
    Value::Object(root)
}

/// Pretty-printed, byte-stable JSON with a trailing newline.
pub fn serialize_profile(profile: &Profile) -> String {
    let mut s = serde_json::to_string_pretty(&profile_value(profile)).expect("json values serialise");
    s.push('\n');
    s
}

/// Single-line variant of [`serialize_profile`] for large generated profiles.
pub fn serialize_profile_compact(profile: &Profile) -> String {
    let mut s = serde_json::to_string(&profile_value(profile)).expect("json values serialise");
    s.push('\n');
    s
}

pub fn parse_outcome(text: &str, profile: &Profile) -> Result<Outcome> {
    let root: Value = serde_json::from_str(text).map_err(syntax)?;
    let obj = root
        .as_object()
        .ok_or_else(|| CmsError::schema("$", "expected an object"))?;
    let ids: HashMap<&str, IssueId> = profile.issues().iter().map(|i| (i.name.as_str(), i.id)).collect();
    let mut values = vec![None; profile.m()];
    for (k, v) in obj {
        let path = format!("$.{k}");
        let id = ids
            .get(k.as_str())
            .copied()
            .ok_or_else(|| CmsError::schema(&path, format!("unknown issue '{k}'")))?;
        values[id] = Some(expect_bool(v, &path)?);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                CmsError::Malformed(format!("outcome is missing issue '{}'", profile.issue_name(i)))
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Outcome::new)
}

pub fn outcome_value(profile: &Profile, outcome: &Outcome) -> Value {
    Value::Object(
        outcome
            .values()
            .iter()
            .enumerate()
            .map(|(i, &b)| (profile.issue_name(i).to_owned(), Value::Bool(b)))
            .collect(),
    )
}

pub fn serialize_outcome(profile: &Profile, outcome: &Outcome) -> String {
    let mut s = serde_json::to_string(&outcome_value(profile, outcome)).expect("json values serialise");
    s.push('\n');
    s
}
