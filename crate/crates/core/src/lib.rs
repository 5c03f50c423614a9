//! Girth-12 (3,L) quasi-cyclic LDPC codes with consecutive lengths.
//!
//! A (J,L) QC-LDPC code is described by a J×L matrix of cyclic shift
//! exponents together with a circulant size `P`. This crate provides:
//!
//! * [`exponent`]: exponent matrices, QC codes and their JSON file format;
//! * [`sparse`]: expansion into sparse parity-check matrices, GF(2) rank and
//!   alist interchange;
//! * [`girth`]: two independent girth computations (exponent-sum cycle
//!   enumeration and BFS on the expanded Tanner graph);
//! * [`family`]: the seed conditions guaranteeing girth 12 for every
//!   circulant size `P >= 2 * max(row 2) + 1`, and family generation;
//! * [`search`]: greedy + simulated-annealing search for new seeds;
//! * [`decoder`] and [`sim`]: a log-domain sum-product decoder and a
//!   BPSK/AWGN Monte Carlo harness.

pub mod decoder;
pub mod error;
pub mod exponent;
pub mod family;
pub mod girth;
pub mod search;
pub mod sim;
pub mod sparse;

pub use decoder::{decode_sp, syndrome, DecodeResult, SumProductDecoder};
pub use error::{Error, Result};
pub use exponent::{CanonicalReport, ExponentMatrix, QcCode};
pub use family::{check_seed_conditions, extend_family, tightness_witness, ConditionReport};
pub use girth::{find_cycle, girth_fast, girth_oracle, CycleWitness, Girth, GirthMethod, GirthReport};
pub use search::{find_certified_seed, CertifiedSeed, SearchConfig};
pub use sim::{monte_carlo, ChannelParams, TrialSummary};
pub use sparse::SparseBinaryMatrix;
