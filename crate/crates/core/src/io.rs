//! Text formats.
//!
//! Set systems: line 1 is `n m`, followed by exactly `m` lines, each holding the
//! space-separated, strictly increasing, 0-based indices of one set. An empty
//! line is an empty set. Every line ends with `\n` in the canonical form.
//!
//! Matrices: `m` rows of `n` comma-separated decimals, no header.
//!
//! Vectors (colorings, points): a JSON array, or whitespace/comma separated decimals.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ConstraintSet, SetSystem};

pub fn parse_set_system(text: &str) -> Result<SetSystem> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or("");
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::parse(1, "header must be `n m`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid universe size `{}`", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid set count `{}`", fields[1])))?;
    if n == 0 {
        return Err(Error::parse(1, "universe size must be positive"));
    }

    let mut sets = Vec::with_capacity(m);
    for (k, line) in lines.enumerate() {
        let line_no = k + 2;
        if sets.len() == m {
            return Err(Error::parse(line_no, format!("more than {m} set lines")));
        }
        let mut set = Vec::new();
        for tok in line.split_whitespace() {
            let i: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid index `{tok}`")))?;
            if i >= n {
                return Err(Error::parse(
                    line_no,
                    format!("index {i} out of range for n = {n}"),
                ));
            }
            if set.last().is_some_and(|&prev| prev >= i) {
                return Err(Error::parse(
                    line_no,
                    "indices must be strictly increasing",
                ));
            }
            set.push(i);
        }
        sets.push(set);
    }
    if sets.len() != m {
        return Err(Error::parse(
            sets.len() + 2,
            format!("expected {m} set lines, found {}", sets.len()),
        ));
    }
    SetSystem::new(n, sets)
}

/// Canonical text form; `parse_set_system(&format_set_system(s)) == s`.
pub fn format_set_system(sys: &SetSystem) -> String {
    let mut out = format!("{} {}\n", sys.n(), sys.m());
    for set in sys.sets() {
        let line: Vec<String> = set.iter().map(|i| i.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_set_system(path: impl AsRef<Path>) -> Result<SetSystem> {
    parse_set_system(&fs::read_to_string(path)?)
}

pub fn save_set_system(sys: &SetSystem, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_set_system(sys))?;
    Ok(())
}

pub fn parse_matrix_csv(text: &str) -> Result<ConstraintSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(line_no, format!("invalid number `{tok}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    line_no,
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    let n = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::parse(1, "matrix has no rows"))?;
    ConstraintSet::new(n, rows)
}

pub fn format_matrix_csv(c: &ConstraintSet) -> String {
    let mut out = String::new();
    for row in c.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<ConstraintSet> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

/// Parses a vector given as a JSON array or as separated decimals.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Error::parse(e.line(), e.to_string()));
    }
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v = tok
                .parse::<f64>()
                .map_err(|_| Error::parse(k + 1, format!("invalid number `{tok}`")))?;
            out.push(v);
        }
    }
    Ok(out)
}

pub fn load_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_vector(&fs::read_to_string(path)?)
}
