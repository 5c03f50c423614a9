//! Sparse binary parity-check matrices stored as per-row column supports.

mod alist;
mod gf2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::QcCode;

pub use alist::{export_alist, import_alist};
pub use gf2::{gf2_rank, GF2_RANK_MAX_BITS};

/// A binary matrix stored row-major as sorted column supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SparseFile")]
pub struct SparseBinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    row_supports: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct SparseFile {
    n_rows: usize,
    n_cols: usize,
    row_supports: Vec<Vec<usize>>,
}

impl TryFrom<SparseFile> for SparseBinaryMatrix {
    type Error = Error;

    fn try_from(f: SparseFile) -> Result<Self> {
        Self::new(f.n_rows, f.n_cols, f.row_supports)
    }
}

impl SparseBinaryMatrix {
    /// Validates that there is one support per row, each strictly increasing
    /// and within `0..n_cols`.
    pub fn new(n_rows: usize, n_cols: usize, row_supports: Vec<Vec<usize>>) -> Result<Self> {
        if row_supports.len() != n_rows {
            return invalid(format!("expected {n_rows} row supports, got {}", row_supports.len()));
        }
        for (r, support) in row_supports.iter().enumerate() {
            if support.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("row {r}: column indices not strictly increasing"));
            }
            if support.last().is_some_and(|&c| c >= n_cols) {
                return invalid(format!("row {r}: column index out of range (n_cols = {n_cols})"));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_supports,
        })
    }

    /// The `n`×`n` identity pattern.
    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_supports: (0..n).map(|r| vec![r]).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_supports[r]
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_supports
    }

    /// Total number of ones.
    pub fn nnz(&self) -> usize {
        self.row_supports.iter().map(Vec::len).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_supports.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n_cols];
        for &c in self.row_supports.iter().flatten() {
            w[c] += 1;
        }
        w
    }

    /// Column supports (sorted row indices per column), computed on demand.
    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (r, support) in self.row_supports.iter().enumerate() {
            for &c in support {
                cols[c].push(r);
            }
        }
        cols
    }

    /// Returns a copy with `row` appended again at the bottom.
    pub fn with_duplicated_row(&self, row: usize) -> Self {
        let mut out = self.clone();
        out.row_supports.push(self.row_supports[row].clone());
        out.n_rows += 1;
        out
    }
}

/// Expands a QC code into its `(J·P) × (L·P)` parity-check matrix.
///
/// Block `(u, v)` is the circulant permutation matrix whose local row `r`
/// has its single one at local column `(r + p[u][v]) mod P`.
pub fn expand(code: &QcCode) -> SparseBinaryMatrix {
    let e = code.exponents();
    let p = code.circulant_size();
    let (j, l) = (e.rows(), e.cols());
    let mut row_supports = Vec::with_capacity(j * p);
    for u in 0..j {
        let shifts: Vec<usize> = e.row(u).iter().map(|&s| s as usize % p).collect();
        for r in 0..p {
            // Blocks occupy disjoint increasing column ranges, so the
            // support comes out sorted.
            row_supports.push(shifts.iter().enumerate().map(|(v, &s)| v * p + (r + s) % p).collect());
        }
    }
    SparseBinaryMatrix {
        n_rows: j * p,
        n_cols: l * p,
        row_supports,
    }
}
