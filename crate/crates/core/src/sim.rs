//! BPSK over AWGN Monte Carlo harness for the sum-product decoder.
//!
//! Every frame transmits the all-zero codeword. Frame `i` draws its noise
//! from its own ChaCha stream `(rng_seed, i)`, so results do not depend on
//! the number of worker threads.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{SumProductDecoder, LLR_CLAMP};
use crate::error::{invalid, Error, Result};
use crate::exponent::QcCode;

/// Largest Tanner graph (edge count) the harness will build.
pub const MAX_SIM_EDGES: usize = 10_000_000;

/// Frames decoded per parallel batch before errors are tallied in order.
const BATCH: usize = 64;

pub const CSV_HEADER: &str = "ebn0_db,frames,bit_errors,frame_errors,ber,fer,cap_hit";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// `f64::INFINITY` means a noiseless channel.
    pub ebn0_db: f64,
    pub rate: f64,
    pub rng_seed: u64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64, rng_seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return invalid(format!("rate must lie in (0, 1), got {rate}"));
        }
        if ebn0_db.is_nan() || ebn0_db == f64::NEG_INFINITY {
            return invalid(format!("Eb/N0 must be a number or +inf, got {ebn0_db}"));
        }
        Ok(Self {
            ebn0_db,
            rate,
            rng_seed,
        })
    }

    /// σ² for unit-energy BPSK; zero on the noiseless channel.
    pub fn noise_variance(&self) -> f64 {
        if self.ebn0_db == f64::INFINITY {
            return 0.0;
        }
        1.0 / (2.0 * self.rate * 10f64.powf(self.ebn0_db / 10.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// The frame cap stopped the run before `min_error_frames` errors.
    pub cap_hit: bool,
}

impl TrialSummary {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.ebn0_db, self.frames, self.bit_errors, self.frame_errors, self.ber, self.fer, self.cap_hit
        )
    }
}

pub fn to_csv(rows: &[TrialSummary]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.csv_row());
    }
    out
}

/// Simulates one SNR point. Stops after `min_error_frames` frame errors or
/// `frame_cap` frames, whichever comes first.
pub fn monte_carlo(
    code: &QcCode,
    channel: &ChannelParams,
    max_iter: usize,
    min_error_frames: u64,
    frame_cap: u64,
) -> Result<TrialSummary> {
    let edges = code.parity_rows().saturating_mul(code.exponents().cols());
    if edges > MAX_SIM_EDGES {
        return Err(Error::Budget(format!(
            "Tanner graph has {edges} edges, simulation limit is {MAX_SIM_EDGES}"
        )));
    }
    let decoder = SumProductDecoder::new(&code.expand());
    simulate(&decoder, channel, max_iter, min_error_frames, frame_cap)
}

/// [`monte_carlo`] with a prebuilt decoder, for sweeping several SNR points.
pub fn simulate(
    decoder: &SumProductDecoder,
    channel: &ChannelParams,
    max_iter: usize,
    min_error_frames: u64,
    frame_cap: u64,
) -> Result<TrialSummary> {
    if max_iter == 0 {
        return invalid("max_iter must be at least 1");
    }
    if frame_cap == 0 {
        return invalid("frame_cap must be at least 1");
    }
    let n = decoder.n_cols();
    let sigma2 = channel.noise_variance();
    let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);

    'outer: while frames < frame_cap {
        let batch = (frame_cap - frames).min(BATCH as u64);
        let results = (frames..frames + batch)
            .into_par_iter()
            .map(|frame| run_frame(decoder, channel.rng_seed, frame, sigma2, n, max_iter))
            .collect::<Result<Vec<u64>>>()?;
        for errors in results {
            frames += 1;
            bit_errors += errors;
            frame_errors += u64::from(errors > 0);
            if min_error_frames > 0 && frame_errors >= min_error_frames {
                break 'outer;
            }
        }
    }

    Ok(TrialSummary {
        ebn0_db: channel.ebn0_db,
        frames,
        bit_errors,
        frame_errors,
        ber: bit_errors as f64 / (frames as f64 * n as f64),
        fer: frame_errors as f64 / frames as f64,
        cap_hit: frame_errors < min_error_frames,
    })
}

/// Decodes one noisy all-zero frame and returns its bit error count.
fn run_frame(
    decoder: &SumProductDecoder,
    seed: u64,
    frame: u64,
    sigma2: f64,
    n: usize,
    max_iter: usize,
) -> Result<u64> {
    let llr: Vec<f64> = if sigma2 == 0.0 {
        vec![LLR_CLAMP; n]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(frame);
        let sigma = sigma2.sqrt();
        (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let y = 1.0 + sigma * z;
                (2.0 * y / sigma2).clamp(-LLR_CLAMP, LLR_CLAMP)
            })
            .collect()
    };
    let result = decoder.decode(&llr, max_iter)?;
    Ok(result.decoded.iter().map(|&b| u64::from(b)).sum())
}
