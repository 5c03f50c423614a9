//! Exponent matrices and quasi-cyclic codes.
//!
//! An exponent matrix is the compact description of a QC-LDPC code: entry
//! `p[u][v]` is the cyclic shift of the circulant permutation block at
//! block-row `u`, block-column `v`. Paired with a circulant size `P` it fixes
//! the parity-check matrix completely.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sparse::{self, SparseBinaryMatrix};

/// A J×L grid of non-negative shift exponents.
///
/// Entries are stored unreduced; a seed found at one circulant size is reused
/// at many others, and reduction modulo `P` happens at expansion time.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ExponentFile", into = "ExponentFile")]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
    label: Option<String>,
}

impl ExponentMatrix {
    /// Builds a matrix from row vectors. Rejects empty or ragged input.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return invalid("exponent matrix needs at least one row");
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return invalid("exponent matrix needs at least one column");
        }
        if let Some((u, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_cols) {
            return invalid(format!(
                "ragged exponent matrix: row {u} has {} entries, expected {n_cols}",
                r.len()
            ));
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            entries: rows.into_iter().flatten().collect(),
            label: None,
        })
    }

    /// The all-zero J×L matrix.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(vec![vec![0; cols]; rows])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of block-rows (J, the column weight).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of block-columns (L, the row weight).
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u32) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|u| self.row(u).to_vec()).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Entries reduced modulo `p`, row-major.
    pub fn reduced(&self, p: usize) -> Vec<i64> {
        self.entries.iter().map(|&e| (e as usize % p) as i64).collect()
    }

    /// Returns a copy with block-columns reordered: column `v` of the result
    /// is column `order[v]` of `self`.
    pub fn permute_columns(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.cols];
        if order.len() != self.cols
            || order
                .iter()
                .any(|&c| c >= self.cols || std::mem::replace(&mut seen[c], true))
        {
            return invalid("column order must be a permutation of 0..L");
        }
        let rows = (0..self.rows)
            .map(|u| order.iter().map(|&c| self.get(u, c)).collect())
            .collect();
        let mut out = Self::new(rows)?;
        out.label = self.label.clone();
        Ok(out)
    }

    /// Checks the canonical form: first row and first column all zero,
    /// entries non-negative.
    pub fn canonical_check(&self) -> CanonicalReport {
        let first_row_zero = self.row(0).iter().all(|&e| e == 0);
        let first_col_zero = (0..self.rows).all(|u| self.get(u, 0) == 0);
        // Guaranteed by the unsigned storage; negatives are rejected on parse.
        let non_negative = true;
        let mut reasons = Vec::new();
        if !first_row_zero {
            reasons.push("first row not zero".to_string());
        }
        if !first_col_zero {
            reasons.push("first column not zero".to_string());
        }
        CanonicalReport {
            first_row_zero,
            first_col_zero,
            non_negative,
            reasons,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: ExponentFile = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("exponent matrix serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ExponentFile::from(self)).expect("exponent matrix serializes")
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|u| self.row(u))).finish()
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in 0..self.rows {
            let line: Vec<String> = self.row(u).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Outcome of [`ExponentMatrix::canonical_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub first_row_zero: bool,
    pub first_col_zero: bool,
    pub non_negative: bool,
    pub reasons: Vec<String>,
}

impl CanonicalReport {
    pub fn passed(&self) -> bool {
        self.first_row_zero && self.first_col_zero && self.non_negative
    }
}

/// On-disk JSON form. Entries are parsed as signed integers so negatives can
/// be reported instead of surfacing as opaque type errors.
#[derive(Serialize, Deserialize)]
struct ExponentFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl TryFrom<ExponentFile> for ExponentMatrix {
    type Error = Error;

    fn try_from(raw: ExponentFile) -> Result<Self> {
        if raw.entries.len() != raw.rows {
            return invalid(format!(
                "\"rows\" is {} but \"entries\" has {} rows",
                raw.rows,
                raw.entries.len()
            ));
        }
        let mut rows = Vec::with_capacity(raw.rows);
        for (u, row) in raw.entries.into_iter().enumerate() {
            if row.len() != raw.cols {
                return invalid(format!(
                    "ragged entries: row {u} has {} values, \"cols\" is {}",
                    row.len(),
                    raw.cols
                ));
            }
            let parsed = row
                .into_iter()
                .enumerate()
                .map(|(v, e)| {
                    u32::try_from(e)
                        .map_err(|_| Error::InvalidInput(format!("entry ({u},{v}) = {e} is negative or too large")))
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(parsed);
        }
        let mut m = ExponentMatrix::new(rows)?;
        m.label = raw.label;
        Ok(m)
    }
}

impl From<ExponentMatrix> for ExponentFile {
    fn from(m: ExponentMatrix) -> Self {
        Self::from(&m)
    }
}

impl From<&ExponentMatrix> for ExponentFile {
    fn from(m: &ExponentMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows)
                .map(|u| m.row(u).iter().map(|&e| e as i64).collect())
                .collect(),
            label: m.label.clone(),
        }
    }
}

/// An exponent matrix paired with a circulant size `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcCode {
    exponents: ExponentMatrix,
    circulant_size: usize,
}

impl QcCode {
    pub fn new(exponents: ExponentMatrix, circulant_size: usize) -> Result<Self> {
        if circulant_size < 2 {
            return invalid(format!("circulant size must be at least 2, got {circulant_size}"));
        }
        Ok(Self {
            exponents,
            circulant_size,
        })
    }

    pub fn exponents(&self) -> &ExponentMatrix {
        &self.exponents
    }

    pub fn circulant_size(&self) -> usize {
        self.circulant_size
    }

    /// Block length N = L·P.
    pub fn block_length(&self) -> usize {
        self.exponents.cols() * self.circulant_size
    }

    /// Number of parity rows M = J·P.
    pub fn parity_rows(&self) -> usize {
        self.exponents.rows() * self.circulant_size
    }

    pub fn expand(&self) -> SparseBinaryMatrix {
        sparse::expand(self)
    }
}
