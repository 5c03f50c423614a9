//! Girth-12 families of consecutive lengths from a single (3,L) seed.
//!
//! A 3×L canonical exponent matrix that
//!
//! 1. has girth 12 at some circulant size `Q`,
//! 2. satisfies `p[1][v] <= p[2][v]` for every column, and
//! 3. satisfies `max(row 2) − second_max(row 2) >= max(row 1)`,
//!
//! keeps girth 12 at every circulant size `P >= 2·max(row 2) + 1`. Below
//! that, at `P = 2·max(row 2)`, the two columns holding 0 and the maximum
//! of row 2 already close an 8-cycle, so the bound cannot be lowered in
//! general.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::{ExponentMatrix, QcCode};
use crate::girth::{find_cycle, girth_fast, CycleWitness, Girth};

/// Ranges up to this many members are verified unless asked otherwise.
pub const DEFAULT_VERIFY_LIMIT: usize = 1000;

/// Verdicts on the three seed conditions plus the values they are built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub cond1_girth12: bool,
    pub cond2_elementwise: bool,
    pub cond3_gap: bool,
    pub p2_max: u32,
    pub p2_second: u32,
    pub p1_max: u32,
    #[serde(rename = "min_P")]
    pub min_p: usize,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.cond1_girth12 && self.cond2_elementwise && self.cond3_gap
    }
}

fn require_seed_shape(e: &ExponentMatrix) -> Result<()> {
    if e.rows() != 3 {
        return invalid(format!(
            "seed conditions apply to (3,L) matrices only; seed has {} block-rows",
            e.rows()
        ));
    }
    let canon = e.canonical_check();
    if !canon.passed() {
        return invalid(format!("seed is not canonical: {}", canon.reasons.join(", ")));
    }
    Ok(())
}

/// Largest and second-largest of `values` taken as a multiset, so a repeated
/// maximum gives `second == max`. A single value is its own runner-up.
fn top_two(values: &[u32]) -> (u32, u32) {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    (sorted[0], *sorted.get(1).unwrap_or(&sorted[0]))
}

/// Checks the three seed conditions for `e` at circulant size `q`.
///
/// Girth is evaluated with [`girth_fast`]. `q` may lie below the resulting
/// `min_p`; a seed is only ever certified at its own size.
pub fn check_seed_conditions(e: &ExponentMatrix, q: usize) -> Result<ConditionReport> {
    require_seed_shape(e)?;
    if q < 2 {
        return invalid(format!("Q must be at least 2, got {q}"));
    }
    if e.max_entry() as usize >= q {
        return invalid(format!("entry {} is not below Q = {q}", e.max_entry()));
    }
    let (row1, row2) = (e.row(1), e.row(2));
    let cond1_girth12 = girth_fast(e, q)?.girth == Girth::Finite(12);
    let cond2_elementwise = row1.iter().zip(row2).all(|(a, b)| a <= b);
    let (p2_max, p2_second) = top_two(row2);
    let p1_max = row1.iter().copied().max().unwrap_or(0);
    Ok(ConditionReport {
        cond1_girth12,
        cond2_elementwise,
        cond3_gap: p2_max - p2_second >= p1_max,
        p2_max,
        p2_second,
        p1_max,
        min_p: 2 * p2_max as usize + 1,
    })
}

/// Returns one code per circulant size in `p_lo..=p_hi`, in ascending order.
///
/// With `verify` set each member is re-checked with [`girth_fast`] and the
/// smallest failing size aborts the call.
pub fn extend_family(e: &ExponentMatrix, q: usize, p_lo: usize, p_hi: usize, verify: bool) -> Result<Vec<QcCode>> {
    let report = check_seed_conditions(e, q)?;
    if !report.all_hold() {
        return Err(Error::Verification(format!(
            "seed does not satisfy the extension conditions at Q = {q}: {report:?}"
        )));
    }
    if p_lo < report.min_p {
        return invalid(format!("P = {p_lo} is below the family bound min_P = {}", report.min_p));
    }
    if p_hi < p_lo {
        return invalid(format!("empty range {p_lo}..={p_hi}"));
    }
    let codes = (p_lo..=p_hi)
        .map(|p| QcCode::new(e.clone(), p))
        .collect::<Result<Vec<_>>>()?;
    if verify {
        let girths = codes
            .par_iter()
            .map(|c| girth_fast(e, c.circulant_size()).map(|r| r.girth))
            .collect::<Result<Vec<_>>>()?;
        if let Some((code, g)) = codes.iter().zip(&girths).find(|(_, g)| **g != Girth::Finite(12)) {
            return Err(Error::Verification(format!(
                "family member P = {} has girth {g}, expected 12",
                code.circulant_size()
            )));
        }
    }
    Ok(codes)
}

/// Whether [`extend_family`] should verify a range of `members` codes by default.
pub fn default_verify(members: usize) -> bool {
    members <= DEFAULT_VERIFY_LIMIT
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Built directly from the columns holding 0 and the unique maximum of row 2.
    Substitution,
    /// Found by exhaustive search because the maximum was not unique or sat
    /// in column 0.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessWitness {
    pub witness: CycleWitness,
    pub source: WitnessSource,
}

/// The 8-cycle present at `P = 2·max(row 2)`, one below the family bound.
///
/// With `x` the column of the maximum, the walk alternates block-rows 0 and
/// 2 over columns 0 and `x`; its exponent sum is `2·p[2][x] ≡ 0`.
pub fn tightness_witness(e: &ExponentMatrix) -> Result<TightnessWitness> {
    require_seed_shape(e)?;
    let row2 = e.row(2);
    let (p2_max, p2_second) = top_two(row2);
    if p2_max == 0 {
        return invalid("row 2 is all zero; no modulus 2·max(row 2) to test");
    }
    let modulus = 2 * p2_max as usize;
    let x = row2.iter().position(|&v| v == p2_max).unwrap_or(0);
    if x != 0 && (row2.len() == 1 || p2_second < p2_max) {
        return Ok(TightnessWitness {
            witness: CycleWitness {
                length: 8,
                rows: vec![0, 2, 0, 2],
                cols: vec![0, x, 0, x],
                modulus,
            },
            source: WitnessSource::Substitution,
        });
    }
    match find_cycle(e, modulus, 8)? {
        Some(witness) => Ok(TightnessWitness {
            witness,
            source: WitnessSource::Search,
        }),
        None => Err(Error::Verification(format!(
            "row 2 maximum is not unique and no 8-cycle exists at P = {modulus}"
        ))),
    }
}

/// One code of a family as listed in a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub girth: usize,
}

/// JSON description of a generated family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyManifest {
    pub seed: serde_json::Value,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "min_P")]
    pub min_p: usize,
    pub members: Vec<FamilyMember>,
    /// Whether every member's girth was recomputed rather than inferred
    /// from the seed conditions.
    pub verified: bool,
}

impl FamilyManifest {
    pub fn new(seed: &ExponentMatrix, q: usize, min_p: usize, codes: &[QcCode], verified: bool) -> Self {
        Self {
            seed: seed.to_json_value(),
            q,
            min_p,
            members: codes
                .iter()
                .map(|c| FamilyMember {
                    p: c.circulant_size(),
                    n: c.block_length(),
                    girth: 12,
                })
                .collect(),
            verified,
        }
    }
}
