//! Tanner-graph girth of QC-LDPC codes.
//!
//! Two independent routes are provided. [`girth_fast`] works on the exponent
//! matrix alone: a closed alternating walk `r0 -c0- r1 -c1- ... -c(k-1)- r0`
//! through the block structure lifts to a 2k-cycle of the expanded graph iff
//! its signed exponent sum vanishes modulo `P`. [`girth_oracle`] expands the
//! matrix and runs BFS on the resulting bipartite graph.

mod cycles;
mod oracle;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::exponent::ExponentMatrix;

pub use cycles::{closed_walk_count, find_cycle, find_cycle_through, find_cycle_with_cap, DEFAULT_ENUMERATION_CAP};
pub use oracle::{girth_oracle, girth_oracle_with_cap, DEFAULT_ORACLE_MAX_EDGES};

/// Girth of a graph: a cycle length or "acyclic".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinite"),
        }
    }
}

// Serialized as an integer, or `null` for an acyclic graph.
impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Girth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<usize>::deserialize(d)?.map_or(Girth::Infinite, Girth::Finite))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GirthMethod {
    ExponentCheck,
    GraphBfs,
}

/// A closed alternating walk through the exponent matrix whose exponent sum
/// is zero modulo `modulus`, i.e. a `length`-cycle of the expanded code.
///
/// The walk is `rows[0] -cols[0]- rows[1] -cols[1]- ... -cols[k-1]- rows[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub length: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub modulus: usize,
}

impl CycleWitness {
    /// `Σ (E[r_i][c_i] − E[r_{i+1}][c_i])` over the walk, unreduced.
    pub fn exponent_sum(&self, e: &ExponentMatrix) -> i64 {
        let k = self.rows.len();
        (0..k)
            .map(|i| {
                let c = self.cols[i];
                e.get(self.rows[i], c) as i64 - e.get(self.rows[(i + 1) % k], c) as i64
            })
            .sum()
    }

    /// Re-checks every witness invariant against `e`.
    pub fn is_valid_for(&self, e: &ExponentMatrix) -> bool {
        let k = self.rows.len();
        k >= 2
            && self.cols.len() == k
            && self.length == 2 * k
            && self.modulus >= 1
            && self.rows.iter().all(|&r| r < e.rows())
            && self.cols.iter().all(|&c| c < e.cols())
            && (0..k).all(|i| self.rows[i] != self.rows[(i + 1) % k])
            && (0..k).all(|i| self.cols[i] != self.cols[(i + 1) % k])
            && self.exponent_sum(e).rem_euclid(self.modulus as i64) == 0
    }
}

/// Girth together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub girth: Girth,
    pub method: GirthMethod,
    pub witness: Option<CycleWitness>,
}

/// Girth from the exponent matrix.
///
/// Searches cycle lengths 4, 6, 8, 10 in order and returns the first one with
/// a witness. If none exists the girth is 12 whenever the matrix has two
/// rows and three columns, or three rows and two columns: the walk over
/// rows `a,b,a,b,a,b` and distinct columns `x,y,z,x,y,z` telescopes to zero
/// for every `P`, so girth never exceeds 12 there. A single block-row or
/// block-column gives a forest. The remaining 2×2 shape can have girth far
/// beyond 12 and is delegated to [`girth_oracle`].
pub fn girth_fast(e: &ExponentMatrix, p: usize) -> Result<GirthReport> {
    if p < 2 {
        return invalid(format!("circulant size must be at least 2, got {p}"));
    }
    let (j, l) = (e.rows(), e.cols());
    if j < 2 || l < 2 {
        return Ok(GirthReport {
            girth: Girth::Infinite,
            method: GirthMethod::ExponentCheck,
            witness: None,
        });
    }
    for length in [4, 6, 8, 10] {
        if let Some(w) = find_cycle(e, p, length)? {
            return Ok(GirthReport {
                girth: Girth::Finite(length),
                method: GirthMethod::ExponentCheck,
                witness: Some(w),
            });
        }
    }
    if (j >= 2 && l >= 3) || (j >= 3 && l >= 2) {
        return Ok(GirthReport {
            girth: Girth::Finite(12),
            method: GirthMethod::ExponentCheck,
            witness: None,
        });
    }
    Ok(GirthReport {
        girth: girth_oracle(e, p)?,
        method: GirthMethod::GraphBfs,
        witness: None,
    })
}

/// True iff `e` has no cycle of length at most 10 at modulus `p`.
///
/// This is the search hot path: lengths are tried shortest first and the
/// scan stops at the first cycle found.
pub fn is_girth12_candidate(e: &ExponentMatrix, p: usize) -> Result<bool> {
    for length in [4, 6, 8, 10] {
        if find_cycle(e, p, length)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff no cycle of length at most 10 passes through block column `col`.
///
/// If the matrix without `col` is already free of such cycles this decides
/// [`is_girth12_candidate`] for the whole matrix.
pub fn is_girth12_candidate_through(e: &ExponentMatrix, p: usize, col: usize) -> Result<bool> {
    for length in [4, 6, 8, 10] {
        if find_cycle_through(e, p, length, col)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn seed() -> ExponentMatrix {
        ExponentMatrix::new(vec![
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 3, 14, 18, 24, 26],
            vec![0, 19, 62, 107, 170, 224],
        ])
        .unwrap()
    }

    #[test]
    fn seed_is_girth_12() {
        let report = girth_fast(&seed(), 393).unwrap();
        assert_eq!(report.girth, Girth::Finite(12));
        assert_eq!(report.method, GirthMethod::ExponentCheck);
        assert!(report.witness.is_none());
    }

    #[test]
    fn seed_below_bound_has_eight_cycle() {
        let report = girth_fast(&seed(), 448).unwrap();
        assert_eq!(report.girth, Girth::Finite(8));
        let w = report.witness.unwrap();
        assert!(w.is_valid_for(&seed()));
        assert_eq!(w.rows, vec![0, 2, 0, 2]);
        assert_eq!(w.cols, vec![0, 5, 0, 5]);
        assert_eq!(w.exponent_sum(&seed()).abs(), 448);
    }

    #[test]
    fn single_block_row_or_column_is_acyclic() {
        let row = ExponentMatrix::new(vec![vec![0, 3, 5, 9]]).unwrap();
        assert_eq!(girth_fast(&row, 11).unwrap().girth, Girth::Infinite);
        let col = ExponentMatrix::new(vec![vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(girth_fast(&col, 11).unwrap().girth, Girth::Infinite);
    }

    #[test]
    fn two_by_two_uses_oracle() {
        let e = ExponentMatrix::new(vec![vec![0, 0], vec![0, 1]]).unwrap();
        let report = girth_fast(&e, 7).unwrap();
        assert_eq!(report.method, GirthMethod::GraphBfs);
        // The base graph is a single 4-cycle with exponent sum 1, so the lift
        // is a union of 4·7-cycles.
        assert_eq!(report.girth, Girth::Finite(28));
    }

    #[test]
    fn report_json_shape() {
        let report = girth_fast(&seed(), 448).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["girth"], 8);
        assert_eq!(v["method"], "EXPONENT_CHECK");
        assert_eq!(v["witness"]["length"], 8);
        assert_eq!(v["witness"]["modulus"], 448);
        assert_eq!(v["witness"]["cols"], serde_json::json!([0, 5, 0, 5]));
        let back: GirthReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, report);

        let acyclic = GirthReport {
            girth: Girth::Infinite,
            method: GirthMethod::GraphBfs,
            witness: None,
        };
        let v = serde_json::to_value(&acyclic).unwrap();
        assert!(v["girth"].is_null() && v["witness"].is_null());
        assert_eq!(serde_json::from_value::<GirthReport>(v).unwrap(), acyclic);
    }

    #[test]
    fn rejects_tiny_modulus() {
        assert!(girth_fast(&seed(), 1).is_err());
    }
}
