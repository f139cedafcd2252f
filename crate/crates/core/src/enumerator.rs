//! Exact finite-length weight enumerators.
//!
//! Everything here is exact: binomials and polynomial coefficients are
//! arbitrary-precision integers and results are reduced rationals. The
//! `*_ln_table` variants keep the integer pieces exact and only round when
//! taking logarithms, which is what the large-`n` bounds need.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{binomial, f_minus, f_plus, ExactPolynomial};

/// Regular `(c, d)` LDGM ensemble with `n` output (check) nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LdgmParams {
    /// Edges per input node.
    pub c: usize,
    /// Edges per check (output) node.
    pub d: usize,
    /// Number of output nodes.
    pub n: usize,
}

impl LdgmParams {
    pub fn new(c: usize, d: usize, n: usize) -> Result<Self> {
        if c == 0 || d == 0 {
            return Err(Error::invalid(format!("LDGM degrees must be positive (c={c}, d={d})")));
        }
        if n == 0 {
            return Err(Error::invalid("LDGM block length must be positive"));
        }
        if !(d * n).is_multiple_of(c) {
            return Err(Error::invalid(format!(
                "d*n = {} is not divisible by c = {c}",
                d * n
            )));
        }
        Ok(LdgmParams { c, d, n })
    }

    /// Number of input nodes, `d n / c`.
    pub fn inputs(&self) -> usize {
        self.d * self.n / self.c
    }

    /// Total number of edges (sockets on either side).
    pub fn edges(&self) -> usize {
        self.d * self.n
    }

    pub fn rate(&self) -> f64 {
        self.d as f64 / self.c as f64
    }
}

/// Gallager `(n, j, k)` LDPC ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LdpcParams {
    pub n: usize,
    /// Variable (column) degree.
    pub j: usize,
    /// Check (row) degree; always even.
    pub k: usize,
}

impl LdpcParams {
    pub fn new(n: usize, j: usize, k: usize) -> Result<Self> {
        if j < 2 || k < 2 {
            return Err(Error::invalid(format!("need j >= 2 and k >= 2 (j={j}, k={k})")));
        }
        if !k.is_multiple_of(2) {
            return Err(Error::invalid(format!("check degree k={k} must be even")));
        }
        if n == 0 || !n.is_multiple_of(k) {
            return Err(Error::invalid(format!("block length n={n} must be a positive multiple of k={k}")));
        }
        Ok(LdpcParams { n, j, k })
    }

    /// Design rate `1 - j/k`.
    pub fn rate(&self) -> f64 {
        1.0 - self.j as f64 / self.k as f64
    }

    /// Number of parity checks, `j n / k`.
    pub fn checks(&self) -> usize {
        self.j * self.n / self.k
    }

    /// Rate-1 `(k, k)` inner LDGM code of the same length.
    pub fn inner_ldgm(&self) -> LdgmParams {
        LdgmParams { c: self.k, d: self.k, n: self.n }
    }
}

/// Exact ensemble-average weight distribution, indexed by weight `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub n: usize,
    values: Vec<BigRational>,
}

impl WeightDistribution {
    pub fn new(values: Vec<BigRational>) -> Self {
        assert!(!values.is_empty(), "weight distribution needs at least weight 0");
        assert!(values.iter().all(|v| !v.is_negative()), "weight distribution entries are nonnegative");
        WeightDistribution { n: values.len() - 1, values }
    }

    pub fn get(&self, l: usize) -> &BigRational {
        &self.values[l]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn total(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// Natural logarithm of each entry (`-inf` for zero entries).
    pub fn ln_values(&self) -> Vec<f64> {
        self.values.iter().map(ln_rational).collect()
    }
}

/// Natural logarithm of a positive big integer, exact up to the final
/// rounding; `-inf` for zero.
pub fn ln_bigint(x: &BigInt) -> f64 {
    match x.sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => {
            let bits = x.bits();
            if bits <= 1000 {
                x.to_f64().expect("fits").ln()
            } else {
                let shift = bits - 64;
                let top: BigInt = x >> shift;
                top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }
}

pub fn ln_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Nearest `f64` to a rational that may be far outside the `f64` range of
/// its numerator and denominator.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&x.abs()).exp()
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `P(H = h | W = w)` for the regular LDGM ensemble: the fraction of socket
/// matchings of `c w` edges onto `d n` check sockets leaving exactly `h`
/// checks with odd parity.
pub fn ldgm_output_weight_probability(params: LdgmParams, w: usize, h: usize) -> Result<BigRational> {
    let params = LdgmParams::new(params.c, params.d, params.n)?;
    if w > params.inputs() || h > params.n {
        return Err(Error::invalid(format!(
            "weights out of range: w={w} (max {}), h={h} (max {})",
            params.inputs(),
            params.n
        )));
    }
    let cw = params.c * w;
    if (h + cw) % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let poly = f_minus(params.d)
        .pow_capped(h, Some(cw))
        .mul_capped(&f_plus(params.d).pow_capped(params.n - h, Some(cw)), Some(cw));
    let count = binomial(params.n, h) * poly.coef(cw);
    Ok(ratio(count, binomial(params.edges(), cw)))
}

/// Average input-output weight enumerator `Z(w, h)` of the `(c, d)` LDGM
/// ensemble.
pub fn ldgm_iowe(params: LdgmParams, w: usize, h: usize) -> Result<BigRational> {
    let p = ldgm_output_weight_probability(params, w, h)?;
    Ok(p * BigRational::from_integer(binomial(params.inputs(), w)))
}

/// Coefficients of `f_+(x, k)^(n/k)`: the number of words of each weight
/// satisfying one layer of `n/k` disjoint weight-`k` checks.
fn layer_counts(params: LdpcParams) -> ExactPolynomial {
    f_plus(params.k).pow_capped(params.n / params.k, None)
}

fn awd_from_layer_count(params: LdpcParams, l: usize, layer: &BigInt) -> BigRational {
    let total = binomial(params.n, l);
    let p = ratio(layer.clone(), total.clone());
    let mut acc = BigRational::from_integer(total);
    for _ in 0..params.j {
        acc *= &p;
    }
    acc
}

/// Average number of weight-`l` codewords in the Gallager `(n, j, k)`
/// ensemble: `C(n,l) * [coef(f_+(x,k)^(n/k), l) / C(n,l)]^j`.
pub fn ldpc_awd(params: LdpcParams, l: usize) -> Result<BigRational> {
    let params = LdpcParams::new(params.n, params.j, params.k)?;
    if l > params.n {
        return Err(Error::invalid(format!("weight l={l} exceeds n={}", params.n)));
    }
    let layer = f_plus(params.k).pow_capped(params.n / params.k, Some(l)).coef(l);
    Ok(awd_from_layer_count(params, l, &layer))
}

pub fn ldpc_awd_table(params: LdpcParams) -> Result<WeightDistribution> {
    let params = LdpcParams::new(params.n, params.j, params.k)?;
    let layer = layer_counts(params);
    let values = (0..=params.n)
        .map(|l| awd_from_layer_count(params, l, &layer.coef(l)))
        .collect();
    Ok(WeightDistribution::new(values))
}

/// `ln` of [`ldpc_awd_table`], computed from exact integer pieces.
pub fn ldpc_awd_ln_table(params: LdpcParams) -> Result<Vec<f64>> {
    let params = LdpcParams::new(params.n, params.j, params.k)?;
    let layer = layer_counts(params);
    let j = params.j as f64;
    Ok((0..=params.n)
        .map(|l| {
            let c = layer.coef(l);
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                (1.0 - j) * ln_bigint(&binomial(params.n, l)) + j * ln_bigint(&c)
            }
        })
        .collect())
}

/// Inclusive `s` range of the concatenated sum for output weight `l`, or
/// `None` when it is empty.
fn concat_range(params: LdpcParams, l: usize) -> Option<(usize, usize)> {
    let lo = l.div_ceil(params.k);
    // floor(n - l/k) = n - ceil(l/k)
    let hi = params.n.checked_sub(lo)?;
    (lo <= hi).then_some((lo, hi))
}

/// Upper bound `N^ub(l)` on the average weight distribution of the
/// LDPC-GM ensemble (outer Gallager code, inner rate-1 `(k, k)` LDGM).
///
/// Codewords of the outer code that collapse onto the same concatenated
/// codeword are counted separately, so this is an upper bound on the
/// true average and not the average itself.
pub fn concat_awd_ub(ldpc: LdpcParams, l: usize) -> Result<BigRational> {
    let ldpc = LdpcParams::new(ldpc.n, ldpc.j, ldpc.k)?;
    if l > ldpc.n {
        return Err(Error::invalid(format!("weight l={l} exceeds n={}", ldpc.n)));
    }
    let Some((lo, hi)) = concat_range(ldpc, l) else {
        return Ok(BigRational::zero());
    };
    let k = ldpc.k;
    let cap = Some(k * hi);
    let inner = f_minus(k)
        .pow_capped(l, cap)
        .mul_capped(&f_plus(k).pow_capped(ldpc.n - l, cap), cap);
    let layer = layer_counts(ldpc);
    Ok(concat_term_sum(ldpc, l, lo, hi, &inner, &layer))
}

fn concat_term_sum(
    ldpc: LdpcParams,
    l: usize,
    lo: usize,
    hi: usize,
    inner: &ExactPolynomial,
    layer: &ExactPolynomial,
) -> BigRational {
    let k = ldpc.k;
    let mut sum = BigRational::zero();
    for s in lo..=hi {
        let c = inner.coef(k * s);
        if c.is_zero() {
            continue;
        }
        let outer = awd_from_layer_count(ldpc, s, &layer.coef(s));
        if outer.is_zero() {
            continue;
        }
        sum += outer * ratio(c, binomial(k * ldpc.n, k * s));
    }
    sum * BigRational::from_integer(binomial(ldpc.n, l))
}

/// Walks `f_-(x,k)^l f_+(x,k)^(n-l)` for `l = 0..=n`, updating by one
/// multiplication by `f_-` and one exact division by `f_+` per step.
fn for_each_inner_polynomial(ldpc: LdpcParams, mut visit: impl FnMut(usize, &ExactPolynomial)) {
    let fm = f_minus(ldpc.k);
    let fp = f_plus(ldpc.k);
    let mut poly = fp.pow_capped(ldpc.n, None);
    for l in 0..=ldpc.n {
        visit(l, &poly);
        if l < ldpc.n {
            poly = (&poly * &fm)
                .div_exact_unit_constant(&fp)
                .expect("f_+ divides f_-^l f_+^(n-l) for l < n");
        }
    }
}

/// Exact `N^ub(l)` for every `l` in `0..=n`.
pub fn concat_awd_ub_table(ldpc: LdpcParams) -> Result<WeightDistribution> {
    let ldpc = LdpcParams::new(ldpc.n, ldpc.j, ldpc.k)?;
    let layer = layer_counts(ldpc);
    let mut values = Vec::with_capacity(ldpc.n + 1);
    for_each_inner_polynomial(ldpc, |l, inner| {
        let v = match concat_range(ldpc, l) {
            Some((lo, hi)) => concat_term_sum(ldpc, l, lo, hi, inner, &layer),
            None => BigRational::zero(),
        };
        values.push(v);
    });
    Ok(WeightDistribution::new(values))
}

/// `ln N^ub(l)` for every `l`, summing in the log domain over exact integer
/// terms. Suitable for block lengths where the rational sums get too large.
pub fn concat_awd_ub_ln_table(ldpc: LdpcParams) -> Result<Vec<f64>> {
    let ldpc = LdpcParams::new(ldpc.n, ldpc.j, ldpc.k)?;
    let k = ldpc.k;
    let outer_ln = ldpc_awd_ln_table(ldpc)?;
    let ln_binom_n: Vec<f64> = (0..=ldpc.n).map(|l| ln_bigint(&binomial(ldpc.n, l))).collect();
    let ln_binom_kn: Vec<f64> = (0..=ldpc.n).map(|s| ln_bigint(&binomial(k * ldpc.n, k * s))).collect();
    let mut out = Vec::with_capacity(ldpc.n + 1);
    for_each_inner_polynomial(ldpc, |l, inner| {
        let Some((lo, hi)) = concat_range(ldpc, l) else {
            out.push(f64::NEG_INFINITY);
            return;
        };
        let terms: Vec<f64> = (lo..=hi)
            .filter_map(|s| {
                let c = inner.coef(k * s);
                let o = outer_ln[s];
                (!c.is_zero() && o.is_finite()).then(|| o - ln_binom_kn[s] + ln_bigint(&c))
            })
            .collect();
        out.push(ln_binom_n[l] + log_sum_exp(&terms));
    });
    Ok(out)
}

/// `ln(sum(exp(x)))`, `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Markov bound on `P(d_min < delta n)`: the sum of `N^ub(l)` over
/// `0 < l < delta n`.
pub fn gv_probability_bound(ldpc: LdpcParams, delta: f64) -> Result<BigRational> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!("delta={delta} must lie in (0, 1/2)")));
    }
    let ldpc = LdpcParams::new(ldpc.n, ldpc.j, ldpc.k)?;
    let limit = delta * ldpc.n as f64;
    let mut sum = BigRational::zero();
    for l in (1..=ldpc.n).take_while(|&l| (l as f64) < limit) {
        sum += concat_awd_ub(ldpc, l)?;
    }
    Ok(sum)
}

/// Reduced ratio helper used by tests and the CLI.
pub fn rational(num: i64, den: i64) -> BigRational {
    let g = num.gcd(&den).max(1);
    BigRational::new(BigInt::from(num / g), BigInt::from(den / g))
}

/// `1` as a rational, handy for comparisons.
pub fn one() -> BigRational {
    BigRational::one()
}
