//! Exhaustive search for zero-sum alternating walks in an exponent matrix.

use super::CycleWitness;
use crate::error::{invalid, Error, Result};
use crate::exponent::ExponentMatrix;

/// Default cap on the number of (row walk, column walk) pairs enumerated by
/// a single [`find_cycle`] call.
pub const DEFAULT_ENUMERATION_CAP: u128 = 200_000_000;

/// Number of closed walks of length `k` on the complete graph `K_n` with no
/// immediate repetition, i.e. sequences `x_0..x_{k-1}` over `n` symbols
/// with `x_i != x_{i+1 mod k}`.
pub fn closed_walk_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let m = (n - 1) as i128;
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    (m.pow(k as u32) + sign * m).max(0) as u128
}

/// Looks for a cycle of exactly `length` in the code given by `e` and `p`.
///
/// Returns the lexicographically smallest witness in `(r0, c0, r1, c1, ...)`
/// order among canonical representatives (smallest column first, then the
/// orientation with `c1 <= c(k-1)`).
pub fn find_cycle(e: &ExponentMatrix, p: usize, length: usize) -> Result<Option<CycleWitness>> {
    find_cycle_with_cap(e, p, length, DEFAULT_ENUMERATION_CAP)
}

pub fn find_cycle_with_cap(e: &ExponentMatrix, p: usize, length: usize, cap: u128) -> Result<Option<CycleWitness>> {
    search(e, p, length, cap, None)
}

/// Like [`find_cycle`] but only considers walks that pass through block
/// column `col`. The witness starts at that column.
pub fn find_cycle_through(e: &ExponentMatrix, p: usize, length: usize, col: usize) -> Result<Option<CycleWitness>> {
    if col >= e.cols() {
        return invalid(format!("column {col} out of range for {} columns", e.cols()));
    }
    search(e, p, length, DEFAULT_ENUMERATION_CAP, Some(col))
}

fn search(
    e: &ExponentMatrix,
    p: usize,
    length: usize,
    cap: u128,
    anchor: Option<usize>,
) -> Result<Option<CycleWitness>> {
    if p < 2 {
        return invalid(format!("circulant size must be at least 2, got {p}"));
    }
    if length < 4 || !length.is_multiple_of(2) {
        return invalid(format!("cycle length must be an even number >= 4, got {length}"));
    }
    let k = length / 2;
    let work = closed_walk_count(e.rows(), k).saturating_mul(closed_walk_count(e.cols(), k));
    if work > cap {
        return Err(Error::Budget(format!(
            "length-{length} search over a {}x{} matrix needs {work} walk pairs (cap {cap}); use the BFS oracle",
            e.rows(),
            e.cols()
        )));
    }
    if work == 0 {
        return Ok(None);
    }

    let mut search = Search {
        shifts: e.reduced(p),
        n_rows: e.rows(),
        n_cols: e.cols(),
        p: p as i64,
        k,
        rows: vec![0; k],
        cols: vec![0; k],
        anchor,
    };
    let found = (0..search.n_rows).any(|r0| {
        search.rows[0] = r0;
        search.pick_col(0, 0)
    });
    Ok(found.then_some(CycleWitness {
        length,
        rows: search.rows,
        cols: search.cols,
        modulus: p,
    }))
}

struct Search {
    shifts: Vec<i64>,
    n_rows: usize,
    n_cols: usize,
    p: i64,
    k: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Fixed first column; otherwise the first column is the walk's minimum.
    anchor: Option<usize>,
}

impl Search {
    #[inline]
    fn shift(&self, r: usize, c: usize) -> i64 {
        self.shifts[r * self.n_cols + c]
    }

    /// Chooses `cols[i]`; `rows[0..=i]` are fixed and `sum` covers steps `< i`.
    fn pick_col(&mut self, i: usize, sum: i64) -> bool {
        let last = i + 1 == self.k;
        let (lo, hi, prev) = match (i, self.anchor) {
            (0, Some(a)) => (a, a + 1, usize::MAX),
            (0, None) => (0, self.n_cols, usize::MAX),
            _ => {
                // c0 is the smallest column of the walk (or the anchor); for
                // the closing column also pick one orientation.
                let floor = if self.anchor.is_some() { 0 } else { self.cols[0] };
                let lo = if last && i >= 2 { self.cols[1].max(floor) } else { floor };
                (lo, self.n_cols, self.cols[i - 1])
            }
        };
        let r = self.rows[i];
        for c in lo..hi {
            if c == prev || (last && c == self.cols[0]) {
                continue;
            }
            self.cols[i] = c;
            if last {
                let total = sum + self.shift(r, c) - self.shift(self.rows[0], c);
                if total.rem_euclid(self.p) == 0 {
                    return true;
                }
            } else if self.pick_row(i + 1, sum + self.shift(r, c)) {
                return true;
            }
        }
        false
    }

    /// Chooses `rows[i]` for `i >= 1`; `partial` still lacks the
    /// `− E[rows[i]][cols[i-1]]` term of step `i - 1`.
    fn pick_row(&mut self, i: usize, partial: i64) -> bool {
        let prev = self.rows[i - 1];
        let c = self.cols[i - 1];
        let last = i + 1 == self.k;
        for r in 0..self.n_rows {
            if r == prev || (last && r == self.rows[0]) {
                continue;
            }
            self.rows[i] = r;
            if self.pick_col(i, partial - self.shift(r, c)) {
                return true;
            }
        }
        false
    }
}
