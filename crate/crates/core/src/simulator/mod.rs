//! Finite-length experiments: sampled codes, the BEC, peeling BP on the
//! joint graph, exact ML erasure decoding and seeded Monte Carlo sweeps.

mod code;
mod decode;
pub mod gf2;
mod monte_carlo;
mod sample;
mod sparse;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use code::{CodeInstance, Encoder};
pub use decode::{bp_decode, ml_decode_bec, TrialResult};
pub use monte_carlo::{
    monte_carlo, run_trial, trial_seed, wilson_interval, write_csv, CodewordMode, SweepConfig, SweepEnsemble,
    SweepRow, CSV_HEADER,
};
pub use sample::{
    configuration_model, largest_remainder, sample_ldgm, sample_ldgm_with, sample_ldpc, sample_ldpc_with, LdgmSample,
};
pub use sparse::SparseBinaryMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    Bp,
    Ml,
}

impl DecoderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecoderKind::Bp => "bp",
            DecoderKind::Ml => "ml",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bp" => Ok(DecoderKind::Bp),
            "ml" => Ok(DecoderKind::Ml),
            other => Err(Error::InvalidParameter(format!("unknown decoder {other:?} (expected bp or ml)"))),
        }
    }
}

/// Erasure pattern of one BEC use; `mask[i]` is true when bit `i` is erased.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub mask: Vec<bool>,
    pub q: f64,
}

impl ChannelRealization {
    pub fn sample<R: Rng>(n: usize, q: f64, rng: &mut R) -> Self {
        let mask = (0..n).map(|_| rng.gen::<f64>() < q).collect();
        ChannelRealization { mask, q }
    }

    pub fn erased_count(&self) -> usize {
        self.mask.iter().filter(|&&e| e).count()
    }
}
