use std::io::{self, Write};

use rayon::prelude::*;

use super::sample::rng_from;
use super::{bp_decode, ml_decode_bec, ChannelRealization, CodeInstance, DecoderKind, TrialResult};
use crate::density_evolution::EnsembleSpec;
use crate::enumerator::LdpcParams;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "q,decoder,trials,bit_failures,block_failures,ci_low,ci_high,seed";

#[derive(Debug, Clone, PartialEq)]
pub enum SweepEnsemble {
    Gallager(LdpcParams),
    /// Configuration-model samples of a truncated ensemble at length `n`.
    Spec { spec: Box<EnsembleSpec<f64>>, n: usize },
}

/// What the encoder sends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodewordMode {
    /// Uniform random codeword (needs one elimination per sampled code).
    Random,
    /// All-zero word; erasure decoding does not depend on the codeword.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ensemble: SweepEnsemble,
    pub q_grid: Vec<f64>,
    pub trials: usize,
    pub decoders: Vec<DecoderKind>,
    pub master_seed: u64,
    pub max_iters: usize,
    pub codeword: CodewordMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub q: f64,
    pub decoder: DecoderKind,
    pub trials: usize,
    /// Erased transmitted bits left unrecovered, summed over trials.
    pub bit_failures: u64,
    pub block_failures: u64,
    /// 95% Wilson interval for the block failure rate.
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl SweepRow {
    pub fn block_failure_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.block_failures as f64 / self.trials as f64
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at grid point `q_index`; any trial can be rerun
/// alone from these three numbers.
pub fn trial_seed(master: u64, q_index: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ q_index as u64) ^ trial as u64)
}

/// 95% Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = failures as f64 / n;
    let den = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Samples a code, a codeword and an erasure pattern from `seed`, then
/// runs each decoder on that same realization.
pub fn run_trial(config: &SweepConfig, q: f64, seed: u64) -> Result<Vec<TrialResult>> {
    let code = match &config.ensemble {
        SweepEnsemble::Gallager(p) => CodeInstance::gallager(*p, seed),
        SweepEnsemble::Spec { spec, n } => CodeInstance::from_ensemble(spec, *n, seed)?,
    };
    let mut rng = rng_from(splitmix64(seed));
    let outer = match config.codeword {
        CodewordMode::Random => code.encoder().random_codeword(&mut rng),
        CodewordMode::Zero => vec![false; code.n()],
    };
    let sent = code.transmit(&outer);
    let rx = ChannelRealization::sample(sent.len(), q, &mut rng);
    config
        .decoders
        .iter()
        .map(|d| {
            let r = match d {
                DecoderKind::Bp => bp_decode(&code, &rx, &sent, config.max_iters),
                DecoderKind::Ml => ml_decode_bec(&code, &rx, &sent),
            };
            match r.wrong_bits(&sent) {
                0 => Ok(r),
                w => Err(Error::Numerical(format!("{d} decoder recovered {w} wrong bits (seed {seed})"))),
            }
        })
        .collect()
}

/// Per-`q` failure counts with Wilson intervals. Trials run in parallel;
/// only integer counters are combined, so the table does not depend on
/// thread count or scheduling.
pub fn monte_carlo(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    for &q in &config.q_grid {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("erasure probability {q} outside [0, 1]")));
        }
    }
    if config.decoders.is_empty() {
        return Err(Error::InvalidParameter("no decoder selected".into()));
    }
    if config.trials == 0 {
        return Ok(Vec::new());
    }
    let nd = config.decoders.len();
    let mut rows = Vec::with_capacity(config.q_grid.len() * nd);
    for (qi, &q) in config.q_grid.iter().enumerate() {
        let counts = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                run_trial(config, q, trial_seed(config.master_seed, qi, t))
                    .map(|rs| rs.iter().map(|r| (r.residual as u64, u64::from(r.failure))).collect::<Vec<_>>())
            })
            .try_reduce(
                || vec![(0u64, 0u64); nd],
                |a, b| Ok(a.iter().zip(&b).map(|(x, y)| (x.0 + y.0, x.1 + y.1)).collect()),
            )?;
        for (d, (bits, blocks)) in config.decoders.iter().zip(counts) {
            let (ci_low, ci_high) = wilson_interval(blocks, config.trials);
            rows.push(SweepRow {
                q,
                decoder: *d,
                trials: config.trials,
                bit_failures: bits,
                block_failures: blocks,
                ci_low,
                ci_high,
                seed: config.master_seed,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.q, r.decoder, r.trials, r.bit_failures, r.block_failures, r.ci_low, r.ci_high, r.seed
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(trials: usize) -> SweepConfig {
        SweepConfig {
            ensemble: SweepEnsemble::Gallager(LdpcParams::new(60, 3, 6).unwrap()),
            q_grid: vec![0.1, 0.3, 0.6],
            trials,
            decoders: vec![DecoderKind::Bp, DecoderKind::Ml],
            master_seed: 42,
            max_iters: 100,
            codeword: CodewordMode::Random,
        }
    }

    #[test]
    fn zero_trials_is_empty() {
        assert!(monte_carlo(&config(0)).unwrap().is_empty());
    }

    #[test]
    fn deterministic_and_ordered() {
        let a = monte_carlo(&config(20)).unwrap();
        let b = monte_carlo(&config(20)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        let ml: Vec<_> = a.iter().filter(|r| r.decoder == DecoderKind::Ml).collect();
        assert!(ml[0].block_failures <= ml[2].block_failures);
        let mut buf = Vec::new();
        write_csv(&a, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo < 1e-12);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(trial_seed(1, 0, 0), trial_seed(1, 0, 1));
        assert_ne!(trial_seed(1, 0, 0), trial_seed(1, 1, 0));
        assert_ne!(trial_seed(1, 0, 0), trial_seed(2, 0, 0));
    }
}
