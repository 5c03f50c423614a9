//! MacKay alist interchange format.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! <N column weights>
//! <M row weights>
//! <N lines: 1-indexed rows of each column, zero padded to max_col_weight>
//! <M lines: 1-indexed columns of each row, zero padded to max_row_weight>
//! ```

use std::fmt::Write;

use super::SparseBinaryMatrix;
use crate::error::{Error, Result};

fn join(values: impl Iterator<Item = usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn padded(support: &[usize], width: usize) -> String {
    join(
        support
            .iter()
            .map(|&i| i + 1)
            .chain(std::iter::repeat_n(0, width - support.len())),
    )
}

/// Serializes `h` in alist format with single spaces and newline-terminated lines.
pub fn export_alist(h: &SparseBinaryMatrix) -> String {
    let cols = h.col_supports();
    let col_w: Vec<usize> = cols.iter().map(Vec::len).collect();
    let row_w = h.row_weights();
    let max_col = col_w.iter().copied().max().unwrap_or(0);
    let max_row = row_w.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(col_w.iter().copied()));
    let _ = writeln!(out, "{}", join(row_w.iter().copied()));
    for support in &cols {
        let _ = writeln!(out, "{}", padded(support, max_col));
    }
    for support in h.row_supports() {
        let _ = writeln!(out, "{}", padded(support, max_row));
    }
    out
}

fn parse_line(line: Option<&str>, what: &str) -> Result<Vec<usize>> {
    let line = line.ok_or_else(|| Error::Parse(format!("alist truncated before {what}")))?;
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in {what}")))
        })
        .collect()
}

fn parse_list(line: Option<&str>, what: &str, bound: usize) -> Result<Vec<usize>> {
    let mut list: Vec<usize> = parse_line(line, what)?
        .into_iter()
        .filter(|&i| i != 0)
        .map(|i| {
            if i > bound {
                Err(Error::Parse(format!("index {i} out of range in {what}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect::<Result<_>>()?;
    list.sort_unstable();
    if list.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse(format!("repeated index in {what}")));
    }
    Ok(list)
}

/// Parses an alist file. Zero padding is optional; the column and row
/// lists must describe the same matrix and agree with the stated weights.
pub fn import_alist(text: &str) -> Result<SparseBinaryMatrix> {
    let mut lines = text.lines();
    let dims = parse_line(lines.next(), "header")?;
    let [n, m] = dims[..] else {
        return Err(Error::Parse("header must be \"N M\"".into()));
    };
    let maxes = parse_line(lines.next(), "max weight line")?;
    if maxes.len() != 2 {
        return Err(Error::Parse("second line must hold two maximum weights".into()));
    }
    let col_w = parse_line(lines.next(), "column weights")?;
    let row_w = parse_line(lines.next(), "row weights")?;
    if col_w.len() != n || row_w.len() != m {
        return Err(Error::Parse("weight lines do not match N and M".into()));
    }

    let mut cols = Vec::with_capacity(n);
    for c in 0..n {
        let list = parse_list(lines.next(), &format!("column {}", c + 1), m)?;
        if list.len() != col_w[c] {
            return Err(Error::Parse(format!("column {} weight mismatch", c + 1)));
        }
        cols.push(list);
    }
    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let list = parse_list(lines.next(), &format!("row {}", r + 1), n)?;
        if list.len() != row_w[r] {
            return Err(Error::Parse(format!("row {} weight mismatch", r + 1)));
        }
        rows.push(list);
    }

    let h = SparseBinaryMatrix::new(m, n, rows)?;
    if h.col_supports() != cols {
        return Err(Error::Parse("column lists disagree with row lists".into()));
    }
    Ok(h)
}
