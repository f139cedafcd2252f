//! Dense univariate polynomials over an exact coefficient ring.
//!
//! The enumerators only ever need a handful of coefficients of large
//! powers, so multiplication takes an optional degree cap and powers are
//! computed by square-and-multiply with the cap applied at every step.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficient ring for [`Polynomial`].
pub trait Coefficient:
    Clone + Zero + One + PartialEq + for<'a> Add<&'a Self, Output = Self> + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<C> Coefficient for C where
    C: Clone + Zero + One + PartialEq + for<'a> Add<&'a C, Output = C> + for<'a> Mul<&'a C, Output = C>
{
}

/// Dense coefficient vector; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and `degree()` is `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![C::one()] }
    }

    /// `c * x^power`.
    pub fn monomial(c: C, power: usize) -> Self {
        let mut coeffs = vec![C::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^power`; zero beyond the degree.
    pub fn coef(&self, power: usize) -> C {
        self.coeffs.get(power).cloned().unwrap_or_else(C::zero)
    }

    /// Drops every term of degree above `cap`.
    pub fn truncate(&self, cap: usize) -> Self {
        let keep = self.coeffs.len().min(cap + 1);
        Self::new(self.coeffs[..keep].to_vec())
    }

    /// Product, discarding terms above `cap` when one is given.
    pub fn mul_capped(&self, other: &Self, cap: Option<usize>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = cap.map_or(full, |c| full.min(c + 1));
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let term = a.clone() * b;
                out[k] = std::mem::replace(&mut out[k], C::zero()) + &term;
            }
        }
        Self::new(out)
    }

    /// `self^exp` by square-and-multiply, truncated at `cap` throughout.
    pub fn pow_capped(&self, exp: usize, cap: Option<usize>) -> Self {
        let mut result = Self::one();
        if exp == 0 {
            return result;
        }
        let mut base = match cap {
            Some(c) => self.truncate(c),
            None => self.clone(),
        };
        let mut e = exp;
        loop {
            if e & 1 == 1 {
                result = result.mul_capped(&base, cap);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_capped(&base, cap);
        }
        result
    }
}

impl<C: Coefficient> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, other: Self) -> Polynomial<C> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coef(i) + &other.coef(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl<C: Coefficient> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, other: Self) -> Polynomial<C> {
        self.mul_capped(other, None)
    }
}

impl<C> Polynomial<C>
where
    C: Coefficient + for<'a> Sub<&'a C, Output = C>,
{
    /// Exact quotient `self / divisor` for a divisor with constant term one,
    /// computed from the low-order end. Returns `None` when the division
    /// leaves a remainder.
    pub fn div_exact_unit_constant(&self, divisor: &Self) -> Option<Self> {
        assert!(
            divisor.coeffs.first().is_some_and(|c| c.is_one()),
            "divisor must have constant term one"
        );
        let dd = divisor.degree()?;
        let Some(nd) = self.degree() else {
            return Some(Self::zero());
        };
        if nd < dd {
            return None;
        }
        let qlen = nd - dd + 1;
        let mut quotient: Vec<C> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let mut acc = self.coeffs[i].clone();
            for m in 1..=dd.min(i) {
                let d = &divisor.coeffs[m];
                if d.is_zero() {
                    continue;
                }
                let t = d.clone() * &quotient[i - m];
                acc = acc - &t;
            }
            quotient.push(acc);
        }
        let q = Self::new(quotient);
        if &(&q * divisor) == self {
            Some(q)
        } else {
            None
        }
    }
}

impl<C: fmt::Debug> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}

impl<C: fmt::Display + Zero> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Polynomial with arbitrary-precision integer coefficients.
pub type ExactPolynomial = Polynomial<BigInt>;

/// `binomial(n, r)` as an exact integer (zero when `r > n`).
pub fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn parity_filtered_binomials(d: usize, odd: bool) -> ExactPolynomial {
    let coeffs = (0..=d)
        .map(|i| if (i % 2 == 1) == odd { binomial(d, i) } else { BigInt::zero() })
        .collect();
    ExactPolynomial::new(coeffs)
}

/// `((1+x)^d - (1-x)^d) / 2`: the odd-power part of `(1+x)^d`.
pub fn f_minus(d: usize) -> ExactPolynomial {
    parity_filtered_binomials(d, true)
}

/// `((1+x)^d + (1-x)^d) / 2`: the even-power part of `(1+x)^d`.
pub fn f_plus(d: usize) -> ExactPolynomial {
    parity_filtered_binomials(d, false)
}

/// Coefficient of `x^power` in `p`.
pub fn coef(p: &ExactPolynomial, power: usize) -> BigInt {
    p.coef(power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> ExactPolynomial {
        ExactPolynomial::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn f_minus_small_degrees() {
        assert_eq!(f_minus(1), ints(&[0, 1]));
        assert_eq!(f_minus(2), ints(&[0, 2]));
        assert_eq!(f_minus(4), ints(&[0, 4, 0, 4]));
    }

    #[test]
    fn f_plus_small_degrees() {
        assert_eq!(f_plus(1), ints(&[1]));
        assert_eq!(f_plus(2), ints(&[1, 0, 1]));
        assert_eq!(f_plus(4), ints(&[1, 0, 6, 0, 1]));
    }

    #[test]
    fn coef_examples() {
        let sq = ints(&[1, 1]).pow_capped(2, None);
        assert_eq!(coef(&sq, 1), BigInt::from(2));
        let prod = &f_minus(2) * &f_plus(2);
        assert_eq!(coef(&prod, 3), BigInt::from(2));
        assert_eq!(coef(&prod, 40), BigInt::zero());
    }

    #[test]
    fn coef_of_f_plus_8_squared_matches_block_enumeration() {
        // Two blocks of 8 sockets, each block holding an even number of
        // ones; count assignments with four ones in total.
        let mut brute = 0u64;
        for mask in 0u32..(1 << 16) {
            let lo = (mask & 0xff).count_ones();
            let hi = (mask >> 8).count_ones();
            if lo % 2 == 0 && hi % 2 == 0 && lo + hi == 4 {
                brute += 1;
            }
        }
        let p = f_plus(8).pow_capped(2, None);
        assert_eq!(coef(&p, 4), BigInt::from(brute));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ints(&[0, 0]).is_zero());
        assert_eq!(ExactPolynomial::monomial(BigInt::from(3), 2).degree(), Some(2));
    }

    #[test]
    fn capped_power_agrees_with_full_power() {
        let base = f_plus(6);
        let full = base.pow_capped(7, None);
        let capped = base.pow_capped(7, Some(13));
        assert_eq!(capped, full.truncate(13));
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = f_minus(8).pow_capped(3, None);
        let b = f_plus(8);
        let prod = &a * &b;
        assert_eq!(prod.div_exact_unit_constant(&b), Some(a));
        assert_eq!(ints(&[1, 1, 1]).div_exact_unit_constant(&ints(&[1, 1])), None);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(f_plus(4).to_string(), "1 + 6x^2 + 1x^4");
        assert_eq!(ExactPolynomial::zero().to_string(), "0");
    }
}
