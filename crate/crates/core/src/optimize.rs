//! One-dimensional solvers shared by the asymptotic and DE code.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimizes `f` on `[lo, hi]` by golden-section search.
///
/// Stops after `max_iter` contractions or once the bracket is narrower
/// than `tol`. Returns the bracket `(lo, hi)` and the best point seen.
pub fn golden_section_min<T: Real>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    tol: T,
    max_iter: usize,
) -> GoldenResult<T> {
    let inv_phi = T::of(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    GoldenResult { lo: a, hi: b, x, fx }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult<T> {
    pub lo: T,
    pub hi: T,
    pub x: T,
    pub fx: T,
}

/// Maximizes `f` on `[lo, hi]` by golden-section search; returns `(x, f(x))`.
pub fn golden_section_max<T: Real>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    tol: T,
    max_iter: usize,
) -> (T, T) {
    let r = golden_section_min(|x| -f(x), lo, hi, tol, max_iter);
    (r.x, -r.fx)
}

/// Root of `f` in `[lo, hi]` by bisection. `f(lo)` and `f(hi)` must have
/// opposite signs (or one of them be zero).
pub fn bisect<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, tol: T, max_iter: usize) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::NoSignChange(format!(
            "f({}) = {}, f({}) = {}",
            lo.to_f64_lossy(),
            fa.to_f64_lossy(),
            hi.to_f64_lossy(),
            fb.to_f64_lossy()
        )));
    }
    let neg_at_a = fa < T::zero();
    let two = T::of(2.0);
    for _ in 0..max_iter {
        let m = (a + b) / two;
        if (b - a).abs() <= tol || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if (fm < T::zero()) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a + b) / two)
}

/// Root of a monotone `f` in `[lo, hi]` by regula falsi with the Illinois
/// modification; the bracket is kept at every step so convergence is never
/// worse than bisection by more than a constant factor.
pub fn illinois<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, tol: T, max_iter: usize) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::NoSignChange(format!(
            "f({}) = {}, f({}) = {}",
            lo.to_f64_lossy(),
            fa.to_f64_lossy(),
            hi.to_f64_lossy(),
            fb.to_f64_lossy()
        )));
    }
    let half = T::of(0.5);
    let mut side = 0i8;
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = (a + b) * half;
        }
        let fc = f(c);
        if fc == T::zero() {
            return Ok(c);
        }
        if (fc > T::zero()) == (fb > T::zero()) {
            b = c;
            fb = fc;
            if side == -1 {
                fa = fa * half;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb = fb * half;
            }
            side = 1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::of_usize(n - 1);
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + step * T::of_usize(i) })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let r = golden_section_min(|x: f64| (x - 1.3).powi(2) + 2.0, -5.0, 5.0, 1e-10, 200);
        assert!((r.x - 1.3).abs() < 1e-6);
        assert!((r.fx - 2.0).abs() < 1e-14);
        let (x, fx) = golden_section_max(|x: f64| -(x + 0.25).powi(2), -1.0, 1.0, 1e-10, 200);
        assert!((x + 0.25).abs() < 1e-6 && fx <= 0.0);
    }

    #[test]
    fn bisect_and_illinois_agree() {
        let f = |x: f64| x.powi(3) - 2.0;
        let a = bisect(f, 0.0, 2.0, 1e-14, 200).unwrap();
        let b = illinois(f, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((a - 2f64.cbrt()).abs() < 1e-12);
        assert!((b - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_reported() {
        assert!(matches!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-9, 50), Err(Error::NoSignChange(_))));
        assert!(illinois(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-9, 50).is_err());
    }

    #[test]
    fn works_in_f32() {
        let r = bisect(|x: f32| x - 0.25, 0.0, 1.0, 1e-6, 100).unwrap();
        assert!((r - 0.25).abs() < 1e-6);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 1.0, 5);
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(linspace::<f64>(0.0, 1.0, 0).is_empty());
    }
}
