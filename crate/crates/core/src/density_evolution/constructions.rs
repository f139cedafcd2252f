//! Check-regular and variable-regular capacity-achieving pairs, their
//! truncations, and the punctured extension.

use num_complex::Complex;

use super::{
    check_probability, tilde_lambda, Construction, Curve, DegreeDistribution, EnsembleSpec, InnerCode, Perspective,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::series::{binomial_series, inverse, mul, newton_solve};

/// First `degree_cap` coefficients `lambda_1 .. lambda_cap` of
///
/// `lambda(x) = [1 - (1-x)^(1/(k-1))] / [1 - (1-q)(1 - kx + (k-1)[1 - (1-x)^(k/(k-1))])]^2`
///
/// by power-series arithmetic. Coefficients below `-1e-12` are an error:
/// they mean `(k, q)` lies outside the range where the pair is valid.
pub fn check_regular_lambda<T: Real>(k: usize, q: T, degree_cap: usize) -> Result<DegreeDistribution<T>> {
    if k < 3 {
        return Err(Error::invalid(format!("check-regular construction needs k >= 3, got {k}")));
    }
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::invalid(format!("erasure probability {q} outside (0, 1)")));
    }
    if degree_cap < 2 {
        return Err(Error::invalid(format!("degree_cap={degree_cap} must be at least 2")));
    }
    if q * q < T::of(1e-12) {
        return Err(Error::SeriesBreakdown(format!("denominator constant term q^2 = {} vanishes", q * q)));
    }
    let n = degree_cap;
    let one = T::one();
    let km1 = T::of_usize(k - 1);
    let mut num = binomial_series(one / km1, n);
    for c in num.iter_mut() {
        *c = -*c;
    }
    num[0] = num[0] + one;
    // 1 - kx + (k-1)[1 - (1-x)^(k/(k-1))]
    let mut poly: Vec<T> = binomial_series(T::of_usize(k) / km1, n).into_iter().map(|c| -c * km1).collect();
    poly[0] = poly[0] + km1 + one;
    poly[1] = poly[1] - T::of_usize(k);
    let mut den: Vec<T> = poly.into_iter().map(|c| -(one - q) * c).collect();
    den[0] = den[0] + one;
    let den2 = mul(&den, &den, n);
    let lambda = mul(&num, &inverse(&den2, n)?, n);
    if let Some((i, c)) = lambda.iter().enumerate().find(|(_, c)| **c < -T::of(super::CLAMP_TOL)) {
        return Err(Error::invalid(format!(
            "lambda_{} = {c} is negative: (k={k}, q={q}) is outside the validity window (k = 3 needs q >= 12/13)",
            i + 1
        )));
    }
    DegreeDistribution::edge_partial(lambda)
}

/// Closed-form check-regular `lambda(x)`.
pub fn check_regular_lambda_closed_form<T: Real>(k: usize, q: T, x: T) -> T {
    let one = T::one();
    let km1 = T::of_usize(k - 1);
    let y = one - x;
    let num = one - y.powf(one / km1);
    let inner = one - T::of_usize(k) * x + km1 * (one - y.powf(T::of_usize(k) / km1));
    let den = one - (one - q) * inner;
    num / (den * den)
}

fn first_below<T: Real>(tails: impl Iterator<Item = T>, target: T) -> Option<(usize, T)> {
    tails.enumerate().find(|(_, t)| *t < target).map(|(i, t)| (i + 1, t))
}

/// Pilot truncation of the check-regular `lambda`.
///
/// `M(epsilon)` is the smallest `M` with
/// `sum_{i > M} lambda_i / i < epsilon (1-q) / (qk)`; the tail uses the
/// exact integral `1/(qk)`, so coefficients past the cap are never needed.
/// Variable nodes of degree above `M` become pilots: they drop out of
/// `lambda` and `lambda~`, whose masses fall below one.
pub fn truncate_check_regular<T: Real>(
    lambda: &DegreeDistribution<T>,
    k: usize,
    q: T,
    epsilon: T,
) -> Result<EnsembleSpec<T>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::invalid(format!("epsilon={epsilon} outside (0, 1)")));
    }
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::invalid(format!("erasure probability {q} outside (0, 1)")));
    }
    let qk = q * T::of_usize(k);
    let total = T::one() / qk;
    let target = epsilon * (T::one() - q) / qk;
    let c = lambda.coeffs();
    let mut partial = T::zero();
    let tails = c.iter().enumerate().map(|(i, &l)| {
        partial = partial + l / T::of_usize(i + 1);
        total - partial
    });
    let (m, tail) = first_below(tails, target).ok_or_else(|| Error::InsufficientDegreeCap {
        cap: c.len(),
        detail: format!("tail sum never drops below {target}"),
    })?;
    let delta = qk * tail;
    let lam = DegreeDistribution::edge_partial(c[..m].to_vec())?;
    let mut lt = vec![T::zero(); m + 1];
    for i in 1..=m {
        lt[i] = qk * c[i - 1] / T::of_usize(i);
    }
    let rate = T::one() - q - delta;
    let bound = (T::one() - epsilon) * (T::one() - q);
    if !(rate > bound) {
        return Err(Error::Numerical(format!("truncated rate {rate} does not exceed {bound}")));
    }
    Ok(EnsembleSpec {
        construction: Construction::CheckRegular { k },
        lambda: Curve::Poly(lam),
        lambda_tilde: Curve::Poly(DegreeDistribution::node_partial(lt)?),
        rho: Curve::Poly(DegreeDistribution::regular(k, Perspective::Edge)?),
        inner: InnerCode::base(),
        q,
        epsilon: Some(epsilon),
        m_eps: Some(m),
        pilot_fraction: delta,
        rate,
    })
}

/// Untruncated check-regular ensemble: closed-form `lambda`, and
/// `lambda~_i = qk lambda_i / i` from the series (the part past the cap is
/// missing, which only makes `lambda~` smaller).
pub fn check_regular_spec<T: Real>(lambda: &DegreeDistribution<T>, k: usize, q: T) -> Result<EnsembleSpec<T>> {
    let qk = q * T::of_usize(k);
    let c = lambda.coeffs();
    let mut lt = vec![T::zero(); c.len() + 1];
    for i in 1..=c.len() {
        lt[i] = qk * c[i - 1] / T::of_usize(i);
    }
    Ok(EnsembleSpec {
        construction: Construction::CheckRegular { k },
        lambda: Curve::CheckRegularLambda { k, q },
        lambda_tilde: Curve::Poly(DegreeDistribution::node_partial(lt)?),
        rho: Curve::Poly(DegreeDistribution::regular(k, Perspective::Edge)?),
        inner: InnerCode::base(),
        q,
        epsilon: None,
        m_eps: None,
        pilot_fraction: T::zero(),
        rate: T::one() - q,
    })
}

/// Root `t in [0, 1]` of `s(1-q) t^3 + q t - s = 0`.
fn cubic_t<T: Real>(q: T, s: T) -> T {
    let one = T::one();
    let a = s * (one - q);
    if a <= T::zero() {
        return if q > T::zero() { (s / q).min(one) } else { one };
    }
    // t^3 + P t - Q = 0 with P = q/a > 0, Q = s/a = 1/(1-q)
    let p = q / a;
    let qq = s / a;
    let three = T::of(3.0);
    let disc = (qq * qq / T::of(4.0) + p * p * p / T::of(27.0)).sqrt();
    let u = (qq / T::of(2.0) + disc).cbrt();
    let v = p / (three * u);
    // u - v, rewritten to avoid cancellation
    let mut t = qq / (u * u + p / three + v * v);
    for _ in 0..2 {
        let f = a * t * t * t + q * t - s;
        let fp = three * a * t * t + q;
        t = t - f / fp;
    }
    t.max(T::zero()).min(one)
}

/// Untruncated variable-regular `rho(y)`, from the real root of its cubic.
pub fn variable_regular_rho_at<T: Real>(q: T, y: T) -> T {
    let s = (T::one() - y).max(T::zero()).sqrt();
    T::one() - cubic_t(q, s)
}

/// The printed closed form
/// `1 + 2(1-q)(1-x)^2 sin(arcsin(sqrt(-27(1-q)(1-x)^{3/2}/(4q^3)))/3) / (sqrt(3) q^4 [-(1-q)(1-x)^{3/2}/q^3]^{3/2})`
/// in complex arithmetic with principal branches.
pub fn variable_regular_closed_form<T: Real>(q: T, x: T) -> Complex<T> {
    let c = |v: T| Complex::new(v, T::zero());
    let one = c(T::one());
    let q = c(q);
    let y = one - c(x);
    let y32 = y.powf(T::of(1.5));
    let inner = (c(T::of(-27.0)) * (one - q) * y32 / (c(T::of(4.0)) * q.powi(3))).sqrt();
    let num = c(T::of(2.0)) * (one - q) * y * y * (inner.asin() / c(T::of(3.0))).sin();
    let den = c(T::of(3.0).sqrt()) * q.powi(4) * (-(one - q) * y32 / q.powi(3)).powf(T::of(1.5));
    one + num / den
}

/// Largest `|closed form - cubic root|` over `points`; `x = 1` and
/// `q = 1` (where the printed form is `0/0`) are skipped. Disagreement
/// above `1e-8` is an error.
pub fn variable_regular_closed_form_check<T: Real>(q: T, points: &[T]) -> Result<T> {
    let mut worst = T::zero();
    let mut worst_at = T::zero();
    if q >= T::one() {
        return Ok(worst);
    }
    for &x in points.iter().filter(|&&x| x < T::one()) {
        let d = (variable_regular_closed_form(q, x).re - variable_regular_rho_at(q, x)).abs();
        if !(d <= worst) {
            worst = d;
            worst_at = x;
        }
    }
    if !(worst <= T::of(1e-8)) {
        return Err(Error::ClosedFormMismatch { max_abs: worst.to_f64_lossy(), at: worst_at.to_f64_lossy() });
    }
    Ok(worst)
}

/// `int_0^1 rho(y) dy` for the untruncated variable-regular `rho`,
/// computed as `int_0^1 (1 - t(s)) 2s ds` (substituting `y = 1 - s^2`) by
/// composite Simpson.
pub fn variable_regular_rho_integral<T: Real>(q: T) -> T {
    let n = 4000;
    let h = T::one() / T::of_usize(n);
    let f = |s: T| (T::one() - cubic_t(q, s)) * T::of(2.0) * s;
    let mut acc = f(T::zero()) + f(T::one());
    for i in 1..n {
        let w = if i % 2 == 1 { T::of(4.0) } else { T::of(2.0) };
        acc = acc + w * f(T::of_usize(i) * h);
    }
    acc * h / T::of(3.0)
}

fn check_variable_regular_q<T: Real>(q: T) -> Result<()> {
    if !(q >= T::of(0.05) && q <= T::one()) {
        return Err(Error::invalid(format!(
            "variable-regular construction is valid for q in [0.05, 1], got {q}"
        )));
    }
    Ok(())
}

/// First `degree_cap` coefficients `rho_1 .. rho_cap` of the
/// variable-regular `rho`.
///
/// With `s = sqrt(1-x)`, `t = 1 - rho` solves `s(1-q) t^3 + q t - s = 0`;
/// the series `t(x)` is found by Newton iteration in the power-series ring
/// starting from `t(0) = 1`.
pub fn variable_regular_rho<T: Real>(q: T, degree_cap: usize) -> Result<DegreeDistribution<T>> {
    check_variable_regular_q(q)?;
    if degree_cap < 2 {
        return Err(Error::invalid(format!("degree_cap={degree_cap} must be at least 2")));
    }
    let n = degree_cap;
    let one = T::one();
    let s = binomial_series(T::of(0.5), n);
    let t = newton_solve(one, n, |t, m| {
        let t2 = mul(t, t, m);
        let t3 = mul(&t2, t, m);
        let st3 = mul(&s, &t3, m);
        let st2 = mul(&s, &t2, m);
        let f = (0..m).map(|i| (one - q) * st3[i] + q * t[i] - s[i]).collect();
        let mut fp: Vec<T> = st2.iter().map(|&c| T::of(3.0) * (one - q) * c).collect();
        fp[0] = fp[0] + q;
        (f, fp)
    })?;
    let mut rho: Vec<T> = t.into_iter().map(|c| -c).collect();
    rho[0] = rho[0] + one;
    DegreeDistribution::edge_partial(rho)
}

/// Untruncated variable-regular ensemble with the exact `rho`.
pub fn variable_regular_spec<T: Real>(q: T) -> Result<EnsembleSpec<T>> {
    check_variable_regular_q(q)?;
    let lambda = DegreeDistribution::regular(3, Perspective::Edge)?;
    let lt = tilde_lambda(&lambda)?;
    Ok(EnsembleSpec {
        construction: Construction::VariableRegular,
        lambda: Curve::Poly(lambda),
        lambda_tilde: Curve::Poly(lt),
        rho: Curve::VariableRegularRho { q },
        inner: InnerCode::base(),
        q,
        epsilon: None,
        m_eps: None,
        pilot_fraction: T::zero(),
        rate: T::one() - q,
    })
}

/// Truncation of the variable-regular `rho` at the smallest `M` with
/// `sum_{i > M} rho_i < epsilon (1-q) / 3`; the dropped mass becomes
/// degree-one checks. The tail is `1 - sum_{i <= M} rho_i` since
/// `rho(1) = 1`.
pub fn truncate_variable_regular<T: Real>(
    rho: &DegreeDistribution<T>,
    q: T,
    epsilon: T,
) -> Result<EnsembleSpec<T>> {
    check_variable_regular_q(q)?;
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::invalid(format!("epsilon={epsilon} outside (0, 1)")));
    }
    let one = T::one();
    let target = epsilon * (one - q) / T::of(3.0);
    let c = rho.coeffs();
    let mut partial = T::zero();
    let tails = c.iter().map(|&r| {
        partial = partial + r;
        one - partial
    });
    let (m, residual) = first_below(tails, target).ok_or_else(|| Error::InsufficientDegreeCap {
        cap: c.len(),
        detail: format!("tail mass never drops below {target}"),
    })?;
    let mut coeffs = c[..m].to_vec();
    coeffs[0] = coeffs[0] + residual.max(T::zero());
    let integral: T = c[..m].iter().enumerate().map(|(i, &r)| r / T::of_usize(i + 1)).sum::<T>() + residual;
    let rate = one - T::of(3.0) * integral;
    let bound = (one - epsilon) * (one - q);
    if !(rate > bound) {
        return Err(Error::Numerical(format!("truncated rate {rate} does not exceed {bound}")));
    }
    let lambda = DegreeDistribution::regular(3, Perspective::Edge)?;
    let lt = tilde_lambda(&lambda)?;
    Ok(EnsembleSpec {
        construction: Construction::VariableRegular,
        lambda: Curve::Poly(lambda),
        lambda_tilde: Curve::Poly(lt),
        rho: Curve::Poly(DegreeDistribution::edge(coeffs)?),
        inner: InnerCode::base(),
        q,
        epsilon: Some(epsilon),
        m_eps: Some(m),
        pilot_fraction: T::zero(),
        rate,
    })
}

/// Same outer ensemble with inner `F(x) = [x(1-p) + p]^2`, run on channel
/// `(q' - p)/(1 - p)`. Its DE coincides with the base ensemble's DE on
/// channel `q'`, and its rate is the base rate divided by `1 - p`.
pub fn punctured_spec<T: Real>(base: &EnsembleSpec<T>, q_prime: T, p: T) -> Result<EnsembleSpec<T>> {
    check_probability(q_prime, "q'")?;
    if !(p >= T::zero() && p <= q_prime && p < T::one()) {
        return Err(Error::invalid(format!("puncturing fraction p={p} outside [0, q'={q_prime}]")));
    }
    let one = T::one();
    let q = ((q_prime - p) / (one - p)).max(T::zero());
    Ok(EnsembleSpec {
        construction: Construction::Punctured {
            base: Box::new(base.construction.clone()),
            p: p.to_f64_lossy(),
            q_prime: q_prime.to_f64_lossy(),
        },
        inner: InnerCode::punctured(p)?,
        q,
        rate: base.rate / (one - p),
        ..base.clone()
    })
}

/// Design channel and per-construction numerator `edges / n` of the
/// complexity formulas.
fn complexity_parts<T: Real>(construction: &Construction, q: T) -> Result<(T, T)> {
    match construction {
        Construction::CheckRegular { k } => Ok((q, q * T::of_usize(*k) + T::of(3.0))),
        Construction::VariableRegular => Ok((q, T::of(6.0))),
        Construction::Punctured { base, q_prime, .. } => complexity_parts(base, T::of(*q_prime)),
        Construction::Custom => Err(Error::invalid("complexity is only defined for the named constructions")),
    }
}

/// Per-information-bit edge-count bound: `(qk+3)/((1-q)(1-epsilon))` for
/// the check-regular and `6/((1-q)(1-epsilon))` for the variable-regular
/// construction (punctured ensembles share their base graph).
pub fn decoding_complexity<T: Real>(spec: &EnsembleSpec<T>) -> Result<T> {
    let (q, num) = complexity_parts(&spec.construction, spec.q)?;
    let eps = spec.epsilon.unwrap_or_else(T::zero);
    Ok(num / ((T::one() - q) * (T::one() - eps)))
}

/// Edges per information bit at the rate the truncation actually achieves
/// (never above [`decoding_complexity`]).
pub fn decoding_complexity_actual<T: Real>(spec: &EnsembleSpec<T>) -> Result<T> {
    let (_, num) = complexity_parts(&spec.construction, spec.q)?;
    let rate = match &spec.construction {
        Construction::Punctured { p, .. } => spec.rate * (T::one() - T::of(*p)),
        _ => spec.rate,
    };
    if !(rate > T::zero()) {
        return Err(Error::invalid("complexity needs a positive rate"));
    }
    Ok(num / rate)
}
