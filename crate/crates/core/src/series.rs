//! Truncated power series over a [`Real`] scalar.
//!
//! A series is a coefficient vector `c` with `c[i]` multiplying `x^i`.
//! Products switch from the schoolbook method to FFT convolution once
//! both operands are long enough; inverses and roots use Newton iteration
//! with doubling precision, so the series used by density evolution cost
//! `O(N log N)` rather than `O(N^2)`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::Real;

const SCHOOLBOOK_LIMIT: usize = 64;

/// First `n` coefficients of `a * b`.
pub fn mul<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    if a.is_empty() || b.is_empty() {
        return vec![T::zero(); n];
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_LIMIT {
        return mul_schoolbook(a, b, n);
    }
    mul_fft(a, b, n)
}

fn mul_schoolbook<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    for (i, &x) in a.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

fn mul_fft<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let full = a.len() + b.len() - 1;
    let len = full.next_power_of_two();
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let load = |v: &[T]| {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
        for (slot, &x) in buf.iter_mut().zip(v) {
            slot.re = x;
        }
        buf
    };
    let mut fa = load(a);
    let mut fb = load(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * *y;
    }
    inv.process(&mut fa);
    let scale = T::one() / T::of_usize(len);
    let mut out: Vec<T> = fa.iter().take(full.min(n)).map(|c| c.re * scale).collect();
    out.resize(n, T::zero());
    out
}

/// First `n` coefficients of `1 / a`; needs `a[0] != 0`.
pub fn inverse<T: Real>(a: &[T], n: usize) -> Result<Vec<T>> {
    let a0 = a.first().copied().unwrap_or_else(T::zero);
    if a0 == T::zero() || !a0.is_finite() {
        return Err(Error::SeriesBreakdown(format!("cannot invert a series with constant term {a0}")));
    }
    let mut b = vec![T::one() / a0];
    let mut m = 1;
    while m < n {
        m = (2 * m).min(n);
        // b <- b (2 - a b)
        let mut e = mul(a, &b, m);
        for c in e.iter_mut() {
            *c = -*c;
        }
        e[0] = e[0] + T::of(2.0);
        b = mul(&b, &e, m);
    }
    b.truncate(n);
    Ok(b)
}

/// First `n` coefficients of `(1 - x)^alpha`.
pub fn binomial_series<T: Real>(alpha: T, n: usize) -> Vec<T> {
    let mut c = Vec::with_capacity(n);
    if n == 0 {
        return c;
    }
    c.push(T::one());
    for i in 1..n {
        let prev = c[i - 1];
        c.push(prev * (T::of_usize(i - 1) - alpha) / T::of_usize(i));
    }
    c
}

/// `sum c[i] x^i` by Horner's rule.
pub fn eval<T: Real>(c: &[T], x: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, &ci| acc * x + ci)
}

/// `sum c[i] i x^(i-1)`.
pub fn eval_derivative<T: Real>(c: &[T], x: T) -> T {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(T::zero(), |acc, (i, &ci)| acc * x + ci * T::of_usize(i))
}

/// Scales every coefficient.
pub fn scale<T: Real>(c: &[T], s: T) -> Vec<T> {
    c.iter().map(|&x| x * s).collect()
}

/// Solves `F(t) = 0` for a series `t` with constant term `t0` by Newton
/// iteration. `residual(t, m)` returns `F(t)` and `F'(t)` truncated to `m`
/// terms.
pub fn newton_solve<T: Real>(
    t0: T,
    n: usize,
    mut residual: impl FnMut(&[T], usize) -> (Vec<T>, Vec<T>),
) -> Result<Vec<T>> {
    let mut t = vec![t0];
    let mut m = 1;
    while m < n {
        m = (2 * m).min(n);
        t.resize(m, T::zero());
        let (f, fp) = residual(&t, m);
        let step = mul(&f, &inverse(&fp, m)?, m);
        for (ti, si) in t.iter_mut().zip(step) {
            *ti = *ti - si;
        }
    }
    t.truncate(n);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn fft_product_matches_schoolbook() {
        let a: Vec<f64> = (0..300).map(|i| ((i * 7 % 13) as f64 - 6.0) / 7.0).collect();
        let b: Vec<f64> = (0..250).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let n = 400;
        assert!(close(&mul_fft(&a, &b, n), &mul_schoolbook(&a, &b, n), 1e-12));
    }

    #[test]
    fn inverse_of_one_minus_x() {
        let inv = inverse(&[1.0f64, -1.0], 500).unwrap();
        assert!(inv.iter().all(|&c| (c - 1.0).abs() < 1e-12));
        assert!(inverse(&[0.0, 1.0], 4).is_err());
    }

    #[test]
    fn binomial_series_square_root() {
        let s = binomial_series(0.5f64, 200);
        let sq = mul(&s, &s, 200);
        assert!((sq[0] - 1.0).abs() < 1e-15 && (sq[1] + 1.0).abs() < 1e-15);
        assert!(sq[2..].iter().all(|c| c.abs() < 1e-13));
    }

    #[test]
    fn horner_and_derivative() {
        let c = [1.0, 2.0, 3.0];
        assert_eq!(eval(&c, 2.0), 17.0);
        assert_eq!(eval_derivative(&c, 2.0), 14.0);
    }

    #[test]
    fn newton_recovers_square_root() {
        // t^2 - (1 - x) = 0, t(0) = 1
        let n = 300;
        let target = binomial_series(0.5, n);
        let rhs = [1.0, -1.0];
        let t = newton_solve(1.0, n, |t, m| {
            let mut f = mul(t, t, m);
            for (i, r) in rhs.iter().enumerate().take(m) {
                f[i] -= r;
            }
            (f, scale(t, 2.0))
        })
        .unwrap();
        assert!(close(&t, &target, 1e-13));
    }
}
