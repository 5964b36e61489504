//! DIMACS CNF export and solver-output import.

use std::io::Write;

use crate::error::{CmsError, Result};
use crate::minsat::formula::CnfInstance;

/// Writes `p cnf <vars> <clauses>` followed, for every clause, by a
/// `c prov <voter> <issue>` comment (0-based) and the clause line with
/// 1-based signed variables terminated by `0`. Duplicates are kept.
pub fn export_dimacs<W: Write>(instance: &CnfInstance, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "p cnf {} {}", instance.num_vars, instance.clauses.len())?;
    for c in &instance.clauses {
        writeln!(sink, "c prov {} {}", c.provenance.voter, c.provenance.issue)?;
        for l in c.literals() {
            write!(sink, "{} ", l.to_dimacs())?;
        }
        writeln!(sink, "0")?;
    }
    Ok(())
}

pub fn to_dimacs_string(instance: &CnfInstance) -> String {
    let mut buf = Vec::new();
    export_dimacs(instance, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads a truth assignment in solver-output form: signed 1-based literals
/// separated by whitespace, optionally on `v` lines and terminated by `0`.
/// Lines starting with `c` or `s` are ignored. Unmentioned variables are
/// false.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Vec<bool>> {
    let mut values = vec![None; num_vars];
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| CmsError::Malformed(format!("line {}: '{tok}' is not a literal", ln + 1)))?;
            if lit == 0 {
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > num_vars {
                return Err(CmsError::Malformed(format!(
                    "line {}: variable {var} out of range 1..={num_vars}",
                    ln + 1
                )));
            }
            let slot = &mut values[var - 1];
            let val = lit > 0;
            match *slot {
                Some(prev) if prev != val => {
                    return Err(CmsError::Malformed(format!(
                        "line {}: variable {var} assigned both ways",
                        ln + 1
                    )))
                }
                _ => *slot = Some(val),
            }
        }
    }
    Ok(values.into_iter().map(|v| v.unwrap_or(false)).collect())
}
