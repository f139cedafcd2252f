use rayon::prelude::*;

use super::{
    check_degrees, concat_objective_with, design_rate, entropy_inverse, entropy_unchecked, w_o_unchecked,
    w_ub_unchecked,
};
use crate::error::{Error, Result};
use crate::optimize::{bisect, linspace};
use crate::scalar::Real;

const ROOT_TOL: f64 = 1e-10;
const SCAN: usize = 500;

/// Normalized Gilbert-Varshamov distance `H^{-1}((1-R) ln 2)`.
pub fn delta_gv<T: Real>(rate: T) -> Result<T> {
    if !(rate >= T::zero() && rate <= T::one()) {
        return Err(Error::invalid(format!("rate {rate} outside [0, 1]")));
    }
    entropy_inverse((T::one() - rate) * T::LN_2())
}

/// Smallest integer `k` strictly above
/// `ln[1 - H(delta_l)/((1-R_o) ln 2)] / ln(1 - 2 delta_l)`.
pub fn k_min_for_delta<T: Real>(delta_l: T, r_o: T) -> Result<usize> {
    if !(r_o >= T::zero() && r_o < T::one()) {
        return Err(Error::invalid(format!("rate {r_o} outside [0, 1)")));
    }
    let gv = delta_gv(r_o)?;
    if !(delta_l > T::zero() && delta_l < gv) {
        return Err(Error::invalid(format!("delta_l={delta_l} outside (0, {gv})")));
    }
    let c = entropy_unchecked(delta_l) / ((T::one() - r_o) * T::LN_2());
    let bound = (-c).ln_1p() / (-T::of(2.0) * delta_l).ln_1p();
    let bound = bound.to_f64_lossy();
    if !bound.is_finite() {
        return Err(Error::Numerical(format!("k bound is not finite at delta_l={delta_l}")));
    }
    Ok((bound.max(0.0).floor() as usize) + 1)
}

/// Root of `w_o` on `(0, 1/2)`.
///
/// Scans a uniform grid for the first nonnegative value after a negative
/// one, then bisects that bracket to `1e-10`.
pub fn delta_o<T: Real>(j: usize, k: usize) -> Result<T> {
    check_degrees(j, k)?;
    let f = |a: T| w_o_unchecked(a, j, k);
    first_crossing(f, T::of(0.5), SCAN).map_err(|e| match e {
        Error::NoNegativeRegion(m) => Error::NoSignChange(format!("w_o for (j={j}, k={k}): {m}")),
        other => other,
    })
}

/// Scans `(0, hi]` and bisects the first `negative -> nonnegative`
/// transition.
fn first_crossing<T: Real>(f: impl Fn(T) -> T, hi: T, scan: usize) -> Result<T> {
    let grid = linspace(T::zero(), hi, scan + 1);
    let mut prev: Option<T> = None;
    for &a in &grid[1..] {
        let v = f(a);
        if v < T::zero() {
            prev = Some(a);
            continue;
        }
        return match prev {
            None => Err(Error::NoNegativeRegion(format!("nonnegative already at a={a}"))),
            Some(p) => bisect(&f, p, a, T::of(ROOT_TOL), 200),
        };
    }
    Err(Error::NoSignChange(format!("negative on the whole scan up to a={hi}")))
}

/// Largest `delta'` with `w_ub(a) < 0` for every grid point in
/// `(0, delta']`, refined by bisection of the first sign change.
pub fn delta_prime<T: Real>(j: usize, k: usize) -> Result<T> {
    check_degrees(j, k)?;
    first_crossing(|a| w_ub_unchecked(a, j, k), T::of(0.5), SCAN)
}

/// Rate guaranteed with high probability, `R_o - max{w_ub(0), 0} / ln 2`.
pub fn guaranteed_rate<T: Real>(j: usize, k: usize) -> Result<T> {
    check_degrees(j, k)?;
    let w0 = w_ub_unchecked(T::zero(), j, k);
    Ok(design_rate::<T>(j, k) - w0.max(T::zero()) / T::LN_2())
}

/// Edges per information bit, `((2-R)k + 1) / R`.
pub fn graphical_complexity_for_rate<T: Real>(rate: T, k: usize) -> Result<T> {
    if !(rate > T::zero() && rate <= T::one()) {
        return Err(Error::invalid(format!("graphical complexity needs a rate in (0, 1], got {rate}")));
    }
    Ok(((T::of(2.0) - rate) * T::of_usize(k) + T::one()) / rate)
}

/// [`graphical_complexity_for_rate`] at the guaranteed rate.
pub fn graphical_complexity<T: Real>(j: usize, k: usize) -> Result<T> {
    graphical_complexity_for_rate(guaranteed_rate::<T>(j, k)?, k)
}

/// `8k(k-1)(1-2 delta_l)^(k-2)`, which must fall below 4 for
/// `H(b) + 2 ln[1 + (1-2b)^k]` to peak at `b = 1/2`.
pub fn second_derivative_condition<T: Real>(k: usize, delta_l: T) -> T {
    let kk = T::of_usize(k);
    T::of(8.0) * kk * (kk - T::one()) * (T::one() - T::of(2.0) * delta_l).powi(k as i32 - 2)
}

fn k_for_second_derivative(delta_l: f64) -> usize {
    let mut k = 2;
    while second_derivative_condition(k, delta_l) >= 4.0 {
        k += 1;
    }
    k
}

/// Smallest degree meeting both sufficient conditions at some `delta_l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MEstimate {
    pub k: usize,
    pub delta_l: f64,
    /// Degree needed for `w_o(delta_l) < 0`.
    pub m1: usize,
    /// Degree needed for the second-derivative condition.
    pub m2: usize,
}

/// Minimizes `max(M1, M2)` over a uniform grid of `delta_l` in
/// `(0, delta_GV)`.
pub fn m_estimate(r_o: f64, grid: usize) -> Result<MEstimate> {
    if grid == 0 {
        return Err(Error::invalid("m_estimate grid must be nonempty"));
    }
    let gv = delta_gv(r_o)?;
    let mut best: Option<MEstimate> = None;
    for i in 1..=grid {
        let d = gv * i as f64 / (grid + 1) as f64;
        let m1 = k_min_for_delta(d, r_o)?;
        let m2 = k_for_second_derivative(d);
        let k = m1.max(m2);
        if best.is_none_or(|b| k < b.k) {
            best = Some(MEstimate { k, delta_l: d, m1, m2 });
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// Summary of the distance thresholds of a `(j, k)` ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub j: usize,
    pub k: usize,
    pub rate: f64,
    pub delta_o: Result<f64>,
    pub delta_prime: Result<f64>,
    pub delta_gv: f64,
    pub m_estimate: MEstimate,
}

impl ThresholdReport {
    /// `0 < delta_o <= delta_GV < 1/2` and `delta' < delta_GV`.
    pub fn is_consistent(&self) -> bool {
        let gv = self.delta_gv;
        let o = self.delta_o.as_ref().is_ok_and(|&d| d > 0.0 && d <= gv);
        let p = self.delta_prime.as_ref().is_ok_and(|&d| d < gv);
        o && p && gv < 0.5
    }
}

pub fn threshold_report(j: usize, k: usize) -> Result<ThresholdReport> {
    check_degrees(j, k)?;
    let rate = guaranteed_rate::<f64>(j, k)?;
    Ok(ThresholdReport {
        j,
        k,
        rate,
        delta_o: delta_o(j, k),
        delta_prime: delta_prime(j, k),
        delta_gv: delta_gv(rate)?,
        m_estimate: m_estimate(design_rate(j, k), 200)?,
    })
}

/// Outcome of the grid certificate for the two ingredients of the
/// low-weight bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub j: usize,
    pub k: usize,
    pub delta_l: f64,
    /// `max f(b) + (1-R_o) ln 2` over the `(a, b)` grid; `<= 1e-9` passes.
    pub f_margin: f64,
    pub f_worst: (f64, f64),
    pub f_passes: bool,
    /// `8k(k-1)(1-2 delta_l)^(k-2)`; `< 4` passes.
    pub second_derivative: f64,
    pub second_derivative_passes: bool,
    /// Smallest degree for which the second-derivative condition holds.
    pub first_passing_k: usize,
}

impl CertificateReport {
    pub fn passes(&self) -> bool {
        self.f_passes && self.second_derivative_passes
    }
}

/// Checks `f(b) <= -(1-R_o) ln 2` on `b in (delta_l, 1-delta_l)` for a
/// grid of `a in [0, 1/2]`, and the second-derivative condition.
pub fn distance_certificate(j: usize, k: usize, delta_l: f64, grid_size: usize) -> Result<CertificateReport> {
    check_degrees(j, k)?;
    if grid_size < 100 {
        return Err(Error::invalid(format!("grid_size={grid_size} must be at least 100")));
    }
    if !(delta_l > 0.0 && delta_l < 0.5) {
        return Err(Error::invalid(format!("delta_l={delta_l} outside (0, 1/2)")));
    }
    let r_o: f64 = design_rate(j, k);
    let target = -(1.0 - r_o) * std::f64::consts::LN_2;
    let bs: Vec<f64> = (1..grid_size)
        .map(|i| delta_l + (1.0 - 2.0 * delta_l) * i as f64 / grid_size as f64)
        .collect();
    let wo: Vec<f64> = bs.par_iter().map(|&b| w_o_unchecked(b, j, k)).collect();
    let a_grid = linspace(0.0, 0.5, grid_size);
    let mut worst = (f64::NEG_INFINITY, (0.0, 0.0));
    for &a in &a_grid {
        for (&b, &w) in bs.iter().zip(&wo) {
            let v = concat_objective_with(a, b, w, k) - target;
            if v > worst.0 {
                worst = (v, (a, b));
            }
        }
    }
    let sd = second_derivative_condition(k, delta_l);
    Ok(CertificateReport {
        j,
        k,
        delta_l,
        f_margin: worst.0,
        f_worst: worst.1,
        f_passes: worst.0 <= 1e-9,
        second_derivative: sd,
        second_derivative_passes: sd < 4.0,
        first_passing_k: k_for_second_derivative(delta_l),
    })
}

/// One row of the growth-rate curve export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub a: f64,
    pub w_o: f64,
    pub w_ub: f64,
    /// `H(a) - (1-R) ln 2`.
    pub random_coding_exponent: f64,
}

/// `w_o`, `w_ub` and `H(a) - (1-R) ln 2` on `grid` uniform points of
/// `[0, 1]`, optionally converted to base 2.
pub fn growth_rate_curve(j: usize, k: usize, grid: usize, base2: bool) -> Result<Vec<CurvePoint>> {
    check_degrees(j, k)?;
    if grid < 2 {
        return Err(Error::invalid(format!("grid={grid} must be at least 2")));
    }
    let rate = guaranteed_rate::<f64>(j, k)?;
    let scale = if base2 { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let points = linspace(0.0, 1.0, grid)
        .into_par_iter()
        .map(|a| CurvePoint {
            a,
            w_o: w_o_unchecked(a, j, k) * scale,
            w_ub: w_ub_unchecked(a, j, k) * scale,
            random_coding_exponent: (entropy_unchecked(a) - (1.0 - rate) * std::f64::consts::LN_2) * scale,
        })
        .collect();
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{w_o, w_ub, GrowthRateQuery};

    #[test]
    fn delta_o_for_4_8() {
        let d: f64 = delta_o(4, 8).unwrap();
        let gv = delta_gv(0.5).unwrap();
        assert!(d > 0.0 && d < gv);
        assert!(w_o(GrowthRateQuery::new(4, 8, d).unwrap()).abs() < 1e-8);
        assert!((d - 0.0626887).abs() < 1e-6);
    }

    #[test]
    fn delta_o_sign_structure_3_6() {
        let d: f64 = delta_o(3, 6).unwrap();
        assert!(w_o(GrowthRateQuery::new(3, 6, d / 2.0).unwrap()) < 0.0);
        assert!(w_o(GrowthRateQuery::new(3, 6, d * 1.01).unwrap()) > 0.0);
    }

    #[test]
    fn delta_o_grows_with_k_at_fixed_rate() {
        let gv = delta_gv(0.5).unwrap();
        let ds: Vec<f64> = [8, 16, 32].iter().map(|&k| delta_o(k / 2, k).unwrap()).collect();
        assert!(ds[0] < ds[1] && ds[1] < ds[2] && ds[2] < gv, "{ds:?}");
    }

    #[test]
    fn k_min_examples() {
        // The bound grows like ln(1/delta_l) as delta_l -> 0.
        let h = |d: f64| -d * d.ln() - (1.0 - d) * (1.0 - d).ln();
        let direct = |d: f64| ((1.0 - h(d) / (0.5 * std::f64::consts::LN_2)).ln() / (1.0 - 2.0 * d).ln()).floor() as usize + 1;
        assert_eq!(k_min_for_delta(1e-6, 0.5).unwrap(), direct(1e-6));
        assert!(k_min_for_delta(1e-9, 0.5).unwrap() > k_min_for_delta(1e-6, 0.5).unwrap());
        let k = k_min_for_delta(0.1, 0.5).unwrap();
        let c = entropy_unchecked(0.1) / (0.5 * std::f64::consts::LN_2);
        assert!(0.8f64.powi(k as i32) < 1.0 - c);
        assert!(0.8f64.powi(k as i32 - 1) >= 1.0 - c);
        assert!(k_min_for_delta(0.2, 0.5).is_err());
        // at such k, delta_o clears delta_l (next even k, j = k/2)
        let kk = (k..).find(|kk| kk % 2 == 0).unwrap();
        let d: f64 = delta_o(kk / 2, kk).unwrap();
        assert!(d > 0.1);
    }

    #[test]
    fn guaranteed_rate_and_complexity() {
        assert_eq!(guaranteed_rate::<f64>(4, 8).unwrap(), 0.5);
        assert!(guaranteed_rate::<f64>(2, 4).unwrap() <= 0.5);
        assert!((graphical_complexity_for_rate(0.5f64, 8).unwrap() - 26.0).abs() < 1e-12);
        assert!((graphical_complexity_for_rate(1.0f64, 8).unwrap() - 9.0).abs() < 1e-12);
        assert!(graphical_complexity_for_rate(0.0, 8).is_err());
        assert!((graphical_complexity::<f64>(4, 8).unwrap() - 26.0).abs() < 1e-12);
    }

    #[test]
    fn delta_prime_for_4_8() {
        let d: f64 = delta_prime(4, 8).unwrap();
        let gv = delta_gv(0.5).unwrap();
        assert!(d > 0.0 && d < gv, "{d} vs {gv}");
        assert!(w_ub(d * 0.99, 4, 8).unwrap() < 0.0);
        assert!(w_ub(d, 4, 8).unwrap().abs() < 1e-7);
    }

    #[test]
    fn second_derivative_examples() {
        assert!((second_derivative_condition(8, 0.05) - 8.0 * 8.0 * 7.0 * 0.9f64.powi(6)).abs() < 1e-9);
        assert!(second_derivative_condition(8, 0.05) > 238.0);
        let v64: f64 = second_derivative_condition(64, 0.05);
        assert!((v64 - 46.96).abs() < 0.05 && v64 > 4.0);
        let k = k_for_second_derivative(0.05);
        assert!(second_derivative_condition(k, 0.05) < 4.0);
        assert!(second_derivative_condition(k - 1, 0.05) >= 4.0);
    }

    #[test]
    fn certificate_reports_failure_at_k8() {
        let r = distance_certificate(4, 8, 0.05, 100).unwrap();
        assert!(!r.second_derivative_passes);
        assert!(r.first_passing_k > 64);
        // b = 1/2 is on the grid (grid_size even) and meets the bound exactly.
        assert!(r.f_margin >= -1e-12);
        assert!(distance_certificate(4, 8, 0.05, 10).is_err());
    }

    #[test]
    fn m_estimate_is_min_over_grid() {
        let m = m_estimate(0.5, 50).unwrap();
        assert_eq!(m.k, m.m1.max(m.m2));
        assert!(m.delta_l > 0.0 && m.delta_l < delta_gv(0.5).unwrap());
    }

    #[test]
    fn curve_base2_at_half() {
        let c = growth_rate_curve(4, 8, 3, true).unwrap();
        assert!((c[1].random_coding_exponent - 0.5).abs() < 1e-12);
        assert!((c[1].w_o - 0.5).abs() < 1e-9);
    }
}
