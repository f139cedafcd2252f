//! Asymptotic growth rates of the outer LDPC and concatenated ensembles.
//!
//! All exponents are in nats. Rates (`R_o`, `R`) are dimensionless and are
//! multiplied by `ln 2` wherever they meet a growth rate.

mod channel;
mod thresholds;

pub use channel::{
    bhattacharyya, gallager_e0, ln_alpha, ml_union_bound, ml_union_bound_with, random_coding_exponent, Channel, MlBoundInputs,
    MlBoundReport,
};
pub use thresholds::{
    delta_gv, delta_o, delta_prime, graphical_complexity, graphical_complexity_for_rate, growth_rate_curve,
    guaranteed_rate, k_min_for_delta, m_estimate, second_derivative_condition, distance_certificate,
    threshold_report, CertificateReport, CurvePoint, MEstimate, ThresholdReport,
};

use crate::error::{Error, Result};
use crate::optimize::{bisect, golden_section_max, golden_section_min, illinois, linspace};
use crate::scalar::{xlnx, Real};

/// Natural-log binary entropy `H(a)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy<T: Real>(a: T) -> Result<T> {
    if !(a >= T::zero() && a <= T::one()) {
        return Err(Error::invalid(format!("entropy argument {a} outside [0, 1]")));
    }
    Ok(entropy_unchecked(a))
}

#[inline]
pub(crate) fn entropy_unchecked<T: Real>(a: T) -> T {
    -xlnx(a) - xlnx(T::one() - a)
}

/// The unique `a` in `[0, 1/2]` with `H(a) = y`, by bisection to `1e-12`.
pub fn entropy_inverse<T: Real>(y: T) -> Result<T> {
    let ln2 = T::LN_2();
    if !(y >= T::zero() && y <= ln2) {
        return Err(Error::invalid(format!("entropy value {y} outside [0, ln 2]")));
    }
    if y == T::zero() {
        return Ok(T::zero());
    }
    if y == ln2 {
        return Ok(T::of(0.5));
    }
    bisect(|a| entropy_unchecked(a) - y, T::zero(), T::of(0.5), T::of(1e-12), 200)
}

pub(crate) fn check_degrees(j: usize, k: usize) -> Result<()> {
    if j < 2 {
        return Err(Error::invalid(format!("variable degree j={j} must be at least 2")));
    }
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::invalid(format!("check degree k={k} must be even and at least 2")));
    }
    if j >= k {
        return Err(Error::invalid(format!("need j < k for a positive design rate (j={j}, k={k})")));
    }
    Ok(())
}

/// Design rate `1 - j/k` of the outer code.
pub fn design_rate<T: Real>(j: usize, k: usize) -> T {
    T::one() - T::of_usize(j) / T::of_usize(k)
}

/// Point at which a growth rate is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRateQuery<T> {
    pub j: usize,
    pub k: usize,
    /// Normalized weight in `[0, 1]`.
    pub a: T,
}

impl<T: Real> GrowthRateQuery<T> {
    pub fn new(j: usize, k: usize, a: T) -> Result<Self> {
        check_degrees(j, k)?;
        if !(a >= T::zero() && a <= T::one()) {
            return Err(Error::invalid(format!("normalized weight a={a} outside [0, 1]")));
        }
        Ok(GrowthRateQuery { j, k, a })
    }

    pub fn rate(&self) -> T {
        design_rate(self.j, self.k)
    }
}

/// `ln r` and `r^m` for `r = (1-x)/(1+x)`, accurate for small `x`.
#[inline]
fn ratio_power<T: Real>(x: T, m: usize) -> T {
    if x <= T::one() {
        let lr = (-x).ln_1p() - x.ln_1p();
        (T::of_usize(m) * lr).exp()
    } else {
        ((T::one() - x) / (T::one() + x)).powi(m as i32)
    }
}

/// `1 - r^m` without cancellation for small `x`.
#[inline]
fn one_minus_ratio_power<T: Real>(x: T, m: usize) -> T {
    if x <= T::one() {
        let lr = (-x).ln_1p() - x.ln_1p();
        -(T::of_usize(m) * lr).exp_m1()
    } else {
        T::one() - ((T::one() - x) / (T::one() + x)).powi(m as i32)
    }
}

/// `ln[((1+x)^k + (1-x)^k) / (2 x^{ak})]` at `x = e^u`.
#[inline]
fn inner_objective<T: Real>(u: T, a: T, k: usize) -> T {
    let x = u.exp();
    let kk = T::of_usize(k);
    kk * x.ln_1p() + ratio_power(x, k).ln_1p() - T::LN_2() - a * kk * u
}

/// Derivative of [`inner_objective`] in `u`; increasing in `u`.
#[inline]
fn inner_derivative<T: Real>(u: T, a: T, k: usize) -> T {
    let x = u.exp();
    let kk = T::of_usize(k);
    kk * x / (T::one() + x) * one_minus_ratio_power(x, k - 1) / (T::one() + ratio_power(x, k)) - a * kk
}

const U_BOUND: f64 = 40.0;

/// `inf_{x>0} ln[((1+x)^k + (1-x)^k) / (2 x^{ak})]`, which is `0` at
/// `a = 0` and `a = 1` (approached as `x -> 0` and `x -> inf`).
fn inner_infimum<T: Real>(a: T, k: usize) -> T {
    if a <= T::zero() || a >= T::one() {
        return T::zero();
    }
    let (lo, hi) = (T::of(-U_BOUND), T::of(U_BOUND));
    let coarse = golden_section_min(|u| inner_objective(u, a, k), lo, hi, T::of(0.05), 40);
    let d = |u| inner_derivative(u, a, k);
    let pad = T::of(0.05);
    let (blo, bhi) = ((coarse.lo - pad).max(lo), (coarse.hi + pad).min(hi));
    let root = if d(blo) <= T::zero() && d(bhi) >= T::zero() {
        illinois(d, blo, bhi, T::of(1e-13), 100)
    } else {
        illinois(d, lo, hi, T::of(1e-13), 200)
    };
    let u = match root {
        Ok(u) => u,
        Err(_) => coarse.x,
    };
    inner_objective(u, a, k).min(coarse.fx)
}

/// Growth rate `w_o(a)` of the Gallager `(n, j, k)` ensemble.
pub fn w_o<T: Real>(query: GrowthRateQuery<T>) -> T {
    w_o_unchecked(query.a, query.j, query.k)
}

pub(crate) fn w_o_unchecked<T: Real>(a: T, j: usize, k: usize) -> T {
    let jj = T::of_usize(j);
    jj / T::of_usize(k) * inner_infimum(a, k) - (jj - T::one()) * entropy_unchecked(a)
}

/// Closed-form upper bound on `w_o(a)` from substituting `x = a/(1-a)`:
/// `(1-R_o) ln[1 + (1-2a)^k] + H(a) - (1-R_o) ln 2`.
pub fn w_o_upper_bound<T: Real>(query: GrowthRateQuery<T>) -> T {
    let q = query;
    let one_minus_r = T::one() - q.rate();
    let t = (T::one() - T::of(2.0) * q.a).powi(q.k as i32);
    one_minus_r * t.ln_1p() + entropy_unchecked(q.a) - one_minus_r * T::LN_2()
}

/// `ln(1 - (1-2b)^k)` and `ln(1 + (1-2b)^k)` for even `k`.
#[inline]
fn ln_one_pm_t<T: Real>(b: T, k: usize) -> (T, T) {
    let two = T::of(2.0);
    let m = b.min(T::one() - b);
    // |1 - 2b| = 1 - 2m, and k is even.
    let ln_abs = (-two * m).ln_1p();
    let t = (T::of_usize(k) * ln_abs).exp();
    let one_minus_t = -(T::of_usize(k) * ln_abs).exp_m1();
    (one_minus_t.ln(), t.ln_1p())
}

/// `f(b) = w_o(b) + a ln[(1-(1-2b)^k)/2] + (1-a) ln[(1+(1-2b)^k)/2]`, the
/// objective of the `w_ub` maximization (the `a ln` term vanishes at
/// `a = 0`).
pub fn concat_objective<T: Real>(a: T, b: T, j: usize, k: usize) -> T {
    concat_objective_with(a, b, w_o_unchecked(b, j, k), k)
}

#[inline]
pub(crate) fn concat_objective_with<T: Real>(a: T, b: T, wo_b: T, k: usize) -> T {
    let (ln_minus, ln_plus) = ln_one_pm_t(b, k);
    let minus = if a == T::zero() { T::zero() } else { a * ln_minus };
    wo_b + minus + (T::one() - a) * ln_plus - T::LN_2()
}

pub(crate) const WUB_SCAN: usize = 2001;

/// Growth rate `w_ub(a)` of the concatenated upper bound `N^ub(an)`.
///
/// The maximization over `b in [a/k, 1 - a/k]` scans 2001 points and
/// refines the two best local maxima by golden-section search.
pub fn w_ub<T: Real>(a: T, j: usize, k: usize) -> Result<T> {
    GrowthRateQuery::new(j, k, a)?;
    Ok(w_ub_unchecked(a, j, k))
}

pub(crate) fn w_ub_unchecked<T: Real>(a: T, j: usize, k: usize) -> T {
    let kk = T::of_usize(k);
    let lo = a / kk;
    let hi = T::one() - a / kk;
    let bs = linspace(lo, hi, WUB_SCAN);
    let vals: Vec<T> = bs.iter().map(|&b| concat_objective(a, b, j, k)).collect();
    let mut best = vals.iter().copied().fold(T::neg_infinity(), T::max);

    let mut peaks: Vec<usize> = (0..vals.len())
        .filter(|&i| {
            let left = i == 0 || vals[i] >= vals[i - 1];
            let right = i + 1 == vals.len() || vals[i] >= vals[i + 1];
            left && right && vals[i].is_finite()
        })
        .collect();
    peaks.sort_by(|&x, &y| vals[y].partial_cmp(&vals[x]).unwrap_or(std::cmp::Ordering::Equal));
    for &i in peaks.iter().take(2) {
        let l = bs[i.saturating_sub(1)];
        let r = bs[(i + 1).min(bs.len() - 1)];
        if r > l {
            let (_, v) = golden_section_max(|b| concat_objective(a, b, j, k), l, r, T::of(1e-12), 80);
            if v > best {
                best = v;
            }
        }
    }
    entropy_unchecked(a) + best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(j: usize, k: usize, a: f64) -> GrowthRateQuery<f64> {
        GrowthRateQuery::new(j, k, a).unwrap()
    }

    #[test]
    fn entropy_values() {
        assert!((binary_entropy(0.5f64).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        assert!(binary_entropy(1.5f64).is_err());
        let y = 0.5 * std::f64::consts::LN_2;
        let a = entropy_inverse(y).unwrap();
        assert!((binary_entropy(a).unwrap() - y).abs() < 1e-10);
        assert!((a - 0.110028).abs() < 1e-6);
        assert!(entropy_inverse(1.0f64).is_err());
    }

    #[test]
    fn w_o_at_half_is_rate_ln2() {
        for (j, k) in [(3, 6), (4, 8), (4, 12), (6, 12)] {
            let v = w_o(q(j, k, 0.5));
            let r = 1.0 - j as f64 / k as f64;
            assert!((v - r * std::f64::consts::LN_2).abs() < 1e-9, "({j},{k}) {v}");
        }
    }

    #[test]
    fn w_o_endpoints_are_zero() {
        assert_eq!(w_o(q(4, 8, 0.0)), 0.0);
        assert_eq!(w_o(q(4, 8, 1.0)), 0.0);
    }

    #[test]
    fn w_o_matches_dense_grid_oracle() {
        // Independent evaluation of the infimum on a dense x grid in the
        // original (not log-substituted) form.
        let (j, k, a) = (4usize, 8usize, 0.01f64);
        let mut best = f64::INFINITY;
        let n = 400_000;
        for i in 0..=n {
            let lx = -8.0 + 16.0 * i as f64 / n as f64;
            let x = 10f64.powf(lx);
            let v = (((1.0 + x).powi(k as i32) + (1.0 - x).powi(k as i32)) / 2.0).ln() - a * k as f64 * x.ln();
            best = best.min(v);
        }
        let h = -a * a.ln() - (1.0 - a) * (1.0 - a).ln();
        let oracle = j as f64 / k as f64 * best - (j as f64 - 1.0) * h;
        let v = w_o(q(j, k, a));
        assert!(v < 0.0);
        assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
    }

    #[test]
    fn upper_bound_is_tight_at_half() {
        let g = q(4, 8, 0.5);
        assert!((w_o_upper_bound(g) - w_o(g)).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_closed_form_value() {
        // (1/2) ln(1 + 2^-8) + H(1/4) - (1/2) ln 2
        let h = -(0.25f64 * 0.25f64.ln()) - 0.75 * 0.75f64.ln();
        let want = 0.5 * (1.0 + 0.5f64.powi(8)).ln() + h - 0.5 * std::f64::consts::LN_2;
        assert!((w_o_upper_bound(q(4, 8, 0.25)) - want).abs() < 1e-15);
    }

    #[test]
    fn w_ub_at_zero_is_not_positive() {
        assert!(w_ub(0.0f64, 4, 8).unwrap() <= 0.0);
    }

    #[test]
    fn w_ub_lower_envelope_from_half() {
        // b = 1/2 is always feasible and contributes -(1-R) ln 2.
        for a in [0.05, 0.2, 0.4] {
            let v = w_ub(a, 4, 8).unwrap();
            let floor = entropy_unchecked(a) - 0.5 * std::f64::consts::LN_2;
            assert!(v >= floor - 1e-12);
        }
    }

    #[test]
    fn f32_path_runs() {
        let g = GrowthRateQuery::new(4, 8, 0.5f32).unwrap();
        assert!((w_o(g) - 0.5 * std::f32::consts::LN_2).abs() < 1e-4);
    }

    #[test]
    fn query_validation() {
        assert!(GrowthRateQuery::new(4, 7, 0.5f64).is_err());
        assert!(GrowthRateQuery::new(4, 8, 1.5f64).is_err());
        assert!(GrowthRateQuery::new(8, 8, 0.5f64).is_err());
    }
}
