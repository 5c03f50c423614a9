//! Flooding-schedule sum-product decoding in the log domain.
//!
//! LLRs follow the `log P(0)/P(1)` convention: positive values favour bit 0.

use crate::error::{invalid, Result};
use crate::sparse::SparseBinaryMatrix;

/// Magnitude bound applied to every message and channel LLR.
pub const LLR_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub decoded: Vec<u8>,
    /// The hard decision satisfies every parity check.
    pub converged: bool,
    pub iterations_used: usize,
}

/// `H · word` over GF(2).
pub fn syndrome(h: &SparseBinaryMatrix, word: &[u8]) -> Result<Vec<u8>> {
    if word.len() != h.n_cols() {
        return invalid(format!(
            "word has {} bits, matrix has {} columns",
            word.len(),
            h.n_cols()
        ));
    }
    Ok(h.row_supports()
        .iter()
        .map(|support| support.iter().fold(0u8, |acc, &c| acc ^ (word[c] & 1)))
        .collect())
}

/// Tanner-graph layout precomputed from a parity-check matrix. Edges are
/// numbered check-major, following the row supports.
#[derive(Debug, Clone)]
pub struct SumProductDecoder {
    n_cols: usize,
    check_offsets: Vec<usize>,
    edge_var: Vec<usize>,
    var_offsets: Vec<usize>,
    var_edges: Vec<usize>,
}

impl SumProductDecoder {
    pub fn new(h: &SparseBinaryMatrix) -> Self {
        let mut check_offsets = Vec::with_capacity(h.n_rows() + 1);
        check_offsets.push(0);
        let mut edge_var = Vec::with_capacity(h.nnz());
        for support in h.row_supports() {
            edge_var.extend_from_slice(support);
            check_offsets.push(edge_var.len());
        }

        let mut var_offsets = vec![0; h.n_cols() + 1];
        for &v in &edge_var {
            var_offsets[v + 1] += 1;
        }
        for v in 0..h.n_cols() {
            var_offsets[v + 1] += var_offsets[v];
        }
        let mut fill = var_offsets.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        Self {
            n_cols: h.n_cols(),
            check_offsets,
            edge_var,
            var_offsets,
            var_edges,
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Runs up to `max_iter` flooding iterations, stopping as soon as the
    /// hard decision has zero syndrome.
    ///
    /// A posterior of exactly zero is an erasure: it is decided as 0 but the
    /// word is never reported as converged.
    pub fn decode(&self, llr: &[f64], max_iter: usize) -> Result<DecodeResult> {
        if llr.len() != self.n_cols {
            return invalid(format!("{} LLRs supplied for {} code bits", llr.len(), self.n_cols));
        }
        if max_iter == 0 {
            return invalid("max_iter must be at least 1");
        }
        if let Some(i) = llr.iter().position(|x| !x.is_finite()) {
            return invalid(format!("LLR {i} is not finite ({})", llr[i]));
        }
        let channel: Vec<f64> = llr.iter().map(|x| x.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
        let n_edges = self.edge_var.len();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; n_edges];
        let mut tanhs = Vec::new();
        let mut suffix = Vec::new();
        let mut posterior = vec![0.0; self.n_cols];
        let mut decoded = vec![0u8; self.n_cols];

        for iteration in 1..=max_iter {
            for w in self.check_offsets.windows(2) {
                let (start, end) = (w[0], w[1]);
                tanhs.clear();
                tanhs.extend(v2c[start..end].iter().map(|m| (0.5 * m).tanh()));
                // Product of all other incoming tanh values via prefix and
                // suffix products, avoiding division by zero.
                suffix.clear();
                suffix.resize(tanhs.len() + 1, 1.0);
                for i in (0..tanhs.len()).rev() {
                    suffix[i] = suffix[i + 1] * tanhs[i];
                }
                let mut prefix = 1.0;
                for (i, t) in tanhs.iter().enumerate() {
                    let others = prefix * suffix[i + 1];
                    c2v[start + i] = (2.0 * others.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
                    prefix *= t;
                }
            }

            let mut erasure = false;
            for v in 0..self.n_cols {
                let edges = &self.var_edges[self.var_offsets[v]..self.var_offsets[v + 1]];
                let total = channel[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                posterior[v] = total;
                for &e in edges {
                    v2c[e] = (total - c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
                decoded[v] = u8::from(total < 0.0);
                erasure |= total == 0.0;
            }

            if !erasure && self.satisfies_checks(&decoded) {
                return Ok(DecodeResult {
                    decoded,
                    converged: true,
                    iterations_used: iteration,
                });
            }
        }
        Ok(DecodeResult {
            decoded,
            converged: false,
            iterations_used: max_iter,
        })
    }

    fn satisfies_checks(&self, word: &[u8]) -> bool {
        self.check_offsets
            .windows(2)
            .all(|w| self.edge_var[w[0]..w[1]].iter().fold(0u8, |acc, &v| acc ^ word[v]) == 0)
    }
}

/// One-shot convenience wrapper around [`SumProductDecoder`].
pub fn decode_sp(h: &SparseBinaryMatrix, llr: &[f64], max_iter: usize) -> Result<DecodeResult> {
    SumProductDecoder::new(h).decode(llr, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{ExponentMatrix, QcCode};

    fn toy() -> SparseBinaryMatrix {
        SparseBinaryMatrix::new(3, 6, vec![vec![0, 1, 3], vec![1, 2, 4], vec![0, 2, 5]]).unwrap()
    }

    fn seed_code(p: usize) -> SparseBinaryMatrix {
        let e = ExponentMatrix::new(vec![
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 3, 14, 18, 24, 26],
            vec![0, 19, 62, 107, 170, 224],
        ])
        .unwrap();
        QcCode::new(e, p).unwrap().expand()
    }

    #[test]
    fn syndrome_basics() {
        let h = SparseBinaryMatrix::identity(3);
        assert_eq!(syndrome(&h, &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(syndrome(&h, &[0, 1, 0]).unwrap(), vec![0, 1, 0]);
        assert!(syndrome(&h, &[0, 1]).is_err());
    }

    #[test]
    fn toy_null_space_by_enumeration() {
        let h = toy();
        let mut codewords = 0;
        for m in 0u32..64 {
            let word: Vec<u8> = (0..6).map(|i| ((m >> i) & 1) as u8).collect();
            // Parity equations written out by hand from the row supports.
            let by_hand = (word[0] ^ word[1] ^ word[3]) == 0
                && (word[1] ^ word[2] ^ word[4]) == 0
                && (word[0] ^ word[2] ^ word[5]) == 0;
            let zero = syndrome(&h, &word).unwrap().iter().all(|&s| s == 0);
            assert_eq!(zero, by_hand);
            codewords += usize::from(zero);
        }
        // Full-rank 3x6 matrix: 2^(6-3) codewords.
        assert_eq!(codewords, 8);
    }

    #[test]
    fn strong_llrs_converge_in_one_iteration() {
        let h = seed_code(449);
        let r = decode_sp(&h, &vec![20.0; h.n_cols()], 80).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations_used, 1);
        assert!(r.decoded.iter().all(|&b| b == 0));
    }

    #[test]
    fn single_weak_error_is_corrected() {
        let h = seed_code(449);
        let mut llr = vec![4.0; h.n_cols()];
        llr[1234] = -1.5;
        let r = decode_sp(&h, &llr, 80).unwrap();
        assert!(r.converged);
        assert!(r.decoded.iter().all(|&b| b == 0));
        assert!(syndrome(&h, &r.decoded).unwrap().iter().all(|&s| s == 0));
    }

    #[test]
    fn zero_llrs_never_converge() {
        let h = seed_code(449);
        let r = decode_sp(&h, &vec![0.0; h.n_cols()], 5).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations_used, 5);
    }

    #[test]
    fn input_validation() {
        let h = toy();
        assert!(decode_sp(&h, &[1.0; 5], 10).is_err());
        assert!(decode_sp(&h, &[1.0; 6], 0).is_err());
        let mut llr = [1.0; 6];
        llr[2] = f64::NAN;
        assert!(decode_sp(&h, &llr, 10).is_err());
        llr[2] = f64::INFINITY;
        assert!(decode_sp(&h, &llr, 10).is_err());
    }

    #[test]
    fn converged_words_are_codewords() {
        let h = toy();
        let llr = [2.0, -0.5, 1.0, 1.5, -2.0, 0.7];
        let r = decode_sp(&h, &llr, 20).unwrap();
        if r.converged {
            assert!(syndrome(&h, &r.decoded).unwrap().iter().all(|&s| s == 0));
        }
    }
}
