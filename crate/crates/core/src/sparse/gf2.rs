use super::SparseBinaryMatrix;
use crate::error::{Error, Result};

/// Largest matrix (rows × columns) accepted by [`gf2_rank`].
pub const GF2_RANK_MAX_BITS: usize = 10_000_000;

/// Rank over GF(2) by dense bitset Gaussian elimination.
///
/// Inputs with more than [`GF2_RANK_MAX_BITS`] entries are refused.
pub fn gf2_rank(h: &SparseBinaryMatrix) -> Result<usize> {
    let bits = h.n_rows().saturating_mul(h.n_cols());
    if bits > GF2_RANK_MAX_BITS {
        return Err(Error::Budget(format!(
            "GF(2) rank of a {}x{} matrix needs {bits} bits, limit is {GF2_RANK_MAX_BITS}",
            h.n_rows(),
            h.n_cols()
        )));
    }
    let words = h.n_cols().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = h
        .row_supports()
        .iter()
        .map(|support| {
            let mut bits = vec![0u64; words];
            for &c in support {
                bits[c / 64] |= 1 << (c % 64);
            }
            bits
        })
        .collect();

    let mut rank = 0;
    for col in 0..h.n_cols() {
        let (w, mask) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (done, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &done[rank];
        for row in rest.iter_mut().filter(|row| row[w] & mask != 0) {
            // Columns left of `col` are already zero in both rows.
            for (a, b) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                *a ^= b;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}
