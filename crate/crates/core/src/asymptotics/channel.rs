use num_bigint::BigInt;
use num_traits::One;

use super::thresholds::{delta_prime, guaranteed_rate};
use crate::enumerator::{concat_awd_ub_ln_table, ln_bigint, LdpcParams};
use crate::error::{Error, Result};
use crate::optimize::golden_section_max;
use crate::scalar::Real;

/// Memoryless binary-input symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel<T> {
    /// Binary erasure channel with erasure probability `q`.
    Bec(T),
    /// Binary symmetric channel with crossover probability `p`.
    Bsc(T),
}

impl<T: Real> Channel<T> {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            Channel::Bec(q) => ("erasure probability", q),
            Channel::Bsc(p) => ("crossover probability", p),
        };
        if v >= T::zero() && v <= T::one() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{name} {v} outside [0, 1]")))
        }
    }

    /// Output alphabet as `(p(y|0), p(y|1))` pairs.
    fn transitions(&self) -> Vec<(T, T)> {
        match *self {
            Channel::Bec(q) => vec![(T::one() - q, T::zero()), (T::zero(), T::one() - q), (q, q)],
            Channel::Bsc(p) => vec![(T::one() - p, p), (p, T::one() - p)],
        }
    }
}

/// `D = sum_y sqrt(p(y|0) p(y|1))`.
pub fn bhattacharyya<T: Real>(channel: Channel<T>) -> Result<T> {
    channel.validate()?;
    Ok(channel.transitions().iter().map(|&(a, b)| (a * b).sqrt()).sum())
}

/// Gallager's `E_0(rho)` with uniform inputs, in nats.
pub fn gallager_e0<T: Real>(channel: Channel<T>, rho: T) -> Result<T> {
    channel.validate()?;
    let e = T::one() / (T::one() + rho);
    let half = T::of(0.5);
    let inner: T = channel
        .transitions()
        .iter()
        .map(|&(a, b)| {
            let s = half * a.powf(e) + half * b.powf(e);
            s.powf(T::one() + rho)
        })
        .sum();
    Ok(-inner.ln())
}

/// Random-coding exponent `E_r(R) = max_{rho in [0,1]} E_0(rho) - rho R ln 2`
/// (nats) for a rate `R` in bits per channel use.
pub fn random_coding_exponent<T: Real>(channel: Channel<T>, rate: T) -> Result<T> {
    channel.validate()?;
    if rate.is_nan() {
        return Err(Error::invalid("rate is NaN"));
    }
    let obj = |rho: T| gallager_e0(channel, rho).map(|e| e - rho * rate * T::LN_2()).unwrap_or(T::nan());
    let (_, v) = golden_section_max(obj, T::zero(), T::one(), T::of(1e-12), 200);
    let best = v.max(obj(T::zero())).max(obj(T::one()));
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Numerical(format!("E_r did not converge at R={rate}")))
    }
}

/// Inputs of the split union bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlBoundInputs {
    /// Bhattacharyya parameter.
    pub d: f64,
    pub rate: f64,
    pub delta_prime: f64,
    pub n: usize,
    /// `ln alpha`; `-inf` when the complement of the low-weight set is empty.
    pub ln_alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlBoundReport {
    pub inputs: MlBoundInputs,
    /// `sum_{l in U} N^ub(l) D^l`.
    pub term1: f64,
    /// `exp(-n E_r(R + ln alpha / (n ln 2)))`, or `None` if `E_r` failed.
    pub term2: Option<f64>,
    /// Largest per-symbol excess of the spectrum over the binomial
    /// spectrum, `max_{l in U^c} [ln N^ub(l) - ln(C(n,l) 2^{-n(1-R)})] / n`.
    pub spectrum_excess: f64,
}

impl MlBoundReport {
    pub fn total(&self) -> Option<f64> {
        self.term2.map(|t| t + self.term1)
    }
}

fn in_low_weight_set(l: usize, n: usize, delta_prime: f64) -> bool {
    let x = l as f64 / n as f64;
    l > 0 && (x <= delta_prime || x >= 1.0 - delta_prime)
}

fn ln_binomials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    for l in 0..=n {
        out.push(ln_bigint(&c));
        c = c * (n - l) / (l + 1);
    }
    out
}

/// `ln alpha` for a spectrum given as `ln N(l)`, or `-inf` if `U^c` is
/// empty.
pub fn ln_alpha(ln_spectrum: &[f64], rate: f64, delta_prime: f64) -> f64 {
    let n = ln_spectrum.len() - 1;
    let ln_binom = ln_binomials(n);
    let ln2 = std::f64::consts::LN_2;
    let nr = n as f64 * rate;
    let ln_denominator = nr * ln2 + (-(-nr * ln2).exp()).ln_1p();
    (1..=n)
        .filter(|&l| !in_low_weight_set(l, n, delta_prime))
        .map(|l| ln_spectrum[l] + n as f64 * ln2 - ln_binom[l])
        .fold(f64::NEG_INFINITY, f64::max)
        - ln_denominator
}

/// Split union bound on the ML block error probability of the LDPC-GM
/// ensemble, with `U` the weights within `delta'` of `0` or `n`.
pub fn ml_union_bound(ldpc: LdpcParams, channel: Channel<f64>) -> Result<MlBoundReport> {
    let dp = delta_prime(ldpc.j, ldpc.k)?;
    ml_union_bound_with(ldpc, channel, dp)
}

/// [`ml_union_bound`] with a precomputed `delta'`.
pub fn ml_union_bound_with(ldpc: LdpcParams, channel: Channel<f64>, delta_prime: f64) -> Result<MlBoundReport> {
    let ldpc = LdpcParams::new(ldpc.n, ldpc.j, ldpc.k)?;
    let d = bhattacharyya(channel)?;
    let rate = guaranteed_rate::<f64>(ldpc.j, ldpc.k)?;
    let n = ldpc.n;
    let spectrum = concat_awd_ub_ln_table(ldpc)?;
    let ln_d = d.ln();
    let term1: f64 = (1..=n)
        .filter(|&l| in_low_weight_set(l, n, delta_prime))
        .map(|l| {
            if d == 0.0 {
                0.0
            } else {
                (spectrum[l] + l as f64 * ln_d).exp()
            }
        })
        .sum();
    let la = ln_alpha(&spectrum, rate, delta_prime);
    let ln2 = std::f64::consts::LN_2;
    let term2 = if la == f64::NEG_INFINITY {
        Some(0.0)
    } else {
        random_coding_exponent(channel, rate + la / (n as f64 * ln2))
            .ok()
            .map(|e| (-(n as f64) * e).exp())
    };
    let ln_binom = ln_binomials(n);
    let spectrum_excess = (1..=n)
        .filter(|&l| !in_low_weight_set(l, n, delta_prime))
        .map(|l| (spectrum[l] - ln_binom[l] + n as f64 * (1.0 - rate) * ln2) / n as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(MlBoundReport {
        inputs: MlBoundInputs { d, rate, delta_prime, n, ln_alpha: la },
        term1,
        term2,
        spectrum_excess,
    })
}
