use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cms_core::json::{parse_outcome, parse_profile, serialize_profile, serialize_profile_compact};
use cms_core::minsat::{parse_assignment, reduce, solve_with_assignment, to_dimacs_string};
use cms_core::validate::errors;
use cms_core::{
    cost_breakdown, generate, max_indegree, solve_elimination, solve_exhaustive, solve_via_minsat, validate,
    CmsError, GenParams, Profile, SolveResult, Topology, DEFAULT_BRUTE_LIMIT, MAX_INDEGREE_CAP,
};
use rayon::prelude::*;
use serde_json::{json, Value};

mod report;

#[derive(Parser)]
#[command(
    name = "cms",
    version,
    about = "Conditional Minisum solver for conditional approval profiles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a (near-)optimal outcome.
    Solve(SolveArgs),
    /// Per-voter dissatisfaction of a given outcome.
    #[command(visible_alias = "evaluate")]
    Eval(EvalArgs),
    /// Emit the MIN SAT instance as DIMACS CNF.
    Reduce(ReduceArgs),
    /// Generate a seeded random profile.
    #[command(visible_alias = "generate")]
    Gen(GenArgs),
    /// Validate a profile.
    #[command(visible_alias = "validate")]
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Elim,
    Minsat,
}

#[derive(Args)]
struct Io {
    /// Profile JSON file, or `-` for standard input.
    #[arg(long, short)]
    input: PathBuf,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Profile file, `-`, or a directory of `*.json` profiles.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, short, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_BRUTE_LIMIT)]
    brute_limit: usize,
    #[arg(long, default_value_t = MAX_INDEGREE_CAP)]
    indegree_cap: usize,
    /// Include the elimination steps in the result.
    #[arg(long)]
    trace: bool,
    /// Human-readable table instead of JSON.
    #[arg(long)]
    pretty: bool,
    /// Worker threads for directory input.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Truth assignment from an external MIN SAT solver (minsat only).
    #[arg(long)]
    assignment: Option<PathBuf>,
    /// Report wall-clock time in `stats` (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    io: Io,
    /// Outcome JSON mapping every issue name to a boolean.
    #[arg(long)]
    outcome: PathBuf,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, default_value_t = MAX_INDEGREE_CAP)]
    indegree_cap: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Per-voter in-degree bound.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// random, path, tree, cycle or series-parallel.
    #[arg(long, default_value = "path")]
    topology: String,
    /// Probability of including each approval statement.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Indented JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long)]
    pretty: bool,
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<CmsError> for Failure {
    fn from(e: CmsError) -> Self {
        let (code, kind) = classify(&e);
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<CmsError>() {
            Some(c) => {
                let (code, kind) = classify(c);
                Failure {
                    code,
                    kind,
                    message: format!("{e:#}"),
                }
            }
            None => Failure {
                code: 1,
                kind: "input",
                message: format!("{e:#}"),
            },
        }
    }
}

fn classify(e: &CmsError) -> (u8, &'static str) {
    match e {
        CmsError::Syntax { .. } => (1, "syntax"),
        CmsError::Schema { .. } => (1, "schema"),
        CmsError::Malformed(_) => (1, "malformed"),
        CmsError::InvalidProfile(_) => (1, "invalid_profile"),
        CmsError::Generator(_) => (1, "generator"),
        CmsError::Io(_) => (1, "io"),
        CmsError::Unsupported(_) => (2, "unsupported"),
        CmsError::TreewidthExceeded { .. } => (2, "treewidth_exceeded"),
        CmsError::InDegreeCap { .. } => (2, "indegree_cap"),
        CmsError::Precondition(_) => (2, "precondition"),
        CmsError::SizeLimit { .. } => (3, "size_limit"),
    }
}

fn error_value(f: &Failure) -> Value {
    json!({ "code": f.code, "kind": f.kind, "message": f.message })
}

type CmdResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", json!({ "error": error_value(&f) }));
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_profile(path: &Path) -> CmdResult<Profile> {
    let text = read_text(path)?;
    parse_profile(&text)
        .with_context(|| match path.as_os_str() == "-" {
            true => "in standard input".to_owned(),
            false => format!("in {}", path.display()),
        })
        .map_err(Failure::from)
}

fn emit(text: &str, output: Option<&Path>) -> CmdResult<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .context("writing standard output")?;
        }
    }
    Ok(())
}

fn json_line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn solve_one(profile: &Profile, a: &SolveArgs, assignment: Option<&str>) -> Result<SolveResult, CmsError> {
    let minsat = |p: &Profile| match assignment {
        Some(text) => {
            let instance = reduce(p, a.indegree_cap)?;
            let values = parse_assignment(text, instance.num_vars)?;
            solve_with_assignment(p, &instance, values)
        }
        None => solve_via_minsat(p, a.indegree_cap),
    };
    match a.method {
        MethodArg::Brute => solve_exhaustive(profile, a.brute_limit),
        MethodArg::Elim => solve_elimination(profile),
        MethodArg::Minsat => minsat(profile),
        MethodArg::Auto => {
            if assignment.is_none() && max_indegree(profile).overall <= 1 {
                match solve_elimination(profile) {
                    Err(CmsError::TreewidthExceeded { .. }) => {}
                    done => return done,
                }
            }
            match minsat(profile) {
                Err(e @ CmsError::InDegreeCap { .. }) if assignment.is_none() => {
                    if profile.m() <= a.brute_limit {
                        solve_exhaustive(profile, a.brute_limit)
                    } else {
                        Err(e)
                    }
                }
                done => done,
            }
        }
    }
}

fn profile_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"));
    files.sort();
    Ok(files)
}

fn cmd_solve(a: SolveArgs) -> CmdResult<u8> {
    if a.assignment.is_some() && !matches!(a.method, MethodArg::Auto | MethodArg::Minsat) {
        return Err(Failure {
            code: 1,
            kind: "usage",
            message: "--assignment requires --method minsat".into(),
        });
    }
    let assignment = a.assignment.as_deref().map(read_text).transpose()?;

    if a.input.is_dir() {
        let files = profile_files(&a.input)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs.max(1))
            .build()
            .context("starting worker threads")?;
        let results: Vec<(String, CmdResult<(Profile, SolveResult)>)> = pool.install(|| {
            files
                .par_iter()
                .map(|f| {
                    let name = f
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    let r = load_profile(f).and_then(|p| {
                        let r = solve_one(&p, &a, assignment.as_deref())?;
                        Ok((p, r))
                    });
                    (name, r)
                })
                .collect()
        });
        let code = results
            .iter()
            .filter_map(|(_, r)| r.as_ref().err())
            .map(|f| f.code)
            .max()
            .unwrap_or(0);
        let text = if a.pretty {
            results
                .iter()
                .map(|(name, r)| match r {
                    Ok((p, s)) => format!("== {name}\n{}", report::solve_table(p, s, a.trace, a.timing)),
                    Err(f) => format!("== {name}\nerror ({}): {}\n", f.kind, f.message),
                })
                .collect::<Vec<_>>()
                .join("\n")
        } else {
            let items: Vec<Value> = results
                .iter()
                .map(|(name, r)| {
                    let mut v = match r {
                        Ok((p, s)) => report::solve_value(p, s, a.trace, a.timing),
                        Err(f) => json!({ "error": error_value(f) }),
                    };
                    v["file"] = Value::String(name.clone());
                    v
                })
                .collect();
            json_line(&Value::Array(items))
        };
        emit(&text, a.output.as_deref())?;
        return Ok(code);
    }

    let profile = load_profile(&a.input)?;
    let r = solve_one(&profile, &a, assignment.as_deref())?;
    let text = if a.pretty {
        report::solve_table(&profile, &r, a.trace, a.timing)
    } else {
        json_line(&report::solve_value(&profile, &r, a.trace, a.timing))
    };
    emit(&text, a.output.as_deref())?;
    Ok(0)
}

fn cmd_eval(a: EvalArgs) -> CmdResult<u8> {
    let profile = load_profile(&a.io.input)?;
    let outcome = parse_outcome(&read_text(&a.outcome)?, &profile)
        .with_context(|| format!("in {}", a.outcome.display()))?;
    let invalid = errors(&profile);
    if !invalid.is_empty() {
        return Err(CmsError::InvalidProfile(invalid).into());
    }
    let (per_voter, total) = cost_breakdown(&profile, &outcome)?;
    let text = if a.pretty {
        report::eval_table(&profile, &per_voter, total)
    } else {
        json_line(&json!({ "per_voter": per_voter, "total": total }))
    };
    emit(&text, a.io.output.as_deref())?;
    Ok(0)
}

fn cmd_reduce(a: ReduceArgs) -> CmdResult<u8> {
    let profile = load_profile(&a.io.input)?;
    let instance = reduce(&profile, a.indegree_cap)?;
    emit(&to_dimacs_string(&instance), a.io.output.as_deref())?;
    Ok(0)
}

fn cmd_gen(a: GenArgs) -> CmdResult<u8> {
    let topology: Topology = a.topology.parse()?;
    let profile = generate(&GenParams {
        seed: a.seed,
        n: a.n,
        m: a.m,
        k: a.k,
        topology,
        density: a.density,
    })?;
    let text = if a.pretty {
        serialize_profile(&profile)
    } else {
        serialize_profile_compact(&profile)
    };
    emit(&text, a.output.as_deref())?;
    Ok(0)
}

fn cmd_check(a: CheckArgs) -> CmdResult<u8> {
    let profile = load_profile(&a.io.input)?;
    let violations = validate(&profile);
    let valid = !violations.iter().any(|v| v.is_error());
    emit(
        &report::check_output(&violations, a.pretty),
        a.io.output.as_deref(),
    )?;
    Ok(if valid { 0 } else { 1 })
}
