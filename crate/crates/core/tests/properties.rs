use ldpcgm::asymptotics::{
    binary_entropy, delta_prime, entropy_inverse, guaranteed_rate, w_o, w_o_upper_bound, w_ub, GrowthRateQuery,
};
use ldpcgm::density_evolution::{
    check_regular_lambda, check_regular_lambda_closed_form, check_regular_spec, de_step, punctured_spec, run,
    tilde_lambda, truncate_variable_regular, variable_regular_rho, variable_regular_rho_integral,
    variable_regular_spec, Construction, Curve, DeState, DegreeDistribution, EnsembleSpec, InnerCode,
};
use ldpcgm::enumerator::{ldgm_iowe, ldpc_awd, ldpc_awd_table};
use ldpcgm::simulator::{bp_decode, ml_decode_bec, ChannelRealization, SparseBinaryMatrix};
use ldpcgm::{CodeInstance, LdgmParams, LdpcParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MATRIX: [(usize, usize); 4] = [(3, 6), (4, 8), (4, 12), (6, 12)];

fn binom(n: usize, r: usize) -> BigInt {
    (0..r).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn ldgm_params() -> impl Strategy<Value = LdgmParams> {
    (1usize..=4, 1usize..=4, 1usize..=6)
        .prop_filter_map("valid small LDGM", |(c, d, n)| {
            if d * n <= 12 {
                LdgmParams::new(c, d, n).ok()
            } else {
                None
            }
        })
}

fn ldpc_params() -> impl Strategy<Value = LdpcParams> {
    (2usize..=5, prop::sample::select(vec![2usize, 4, 6, 8]), 1usize..=6)
        .prop_filter_map("valid LDPC", |(j, k, m)| LdpcParams::new(k * m, j, k).ok())
}

/// Random edge-perspective distribution with `len` coefficients.
fn edge_dist(len: std::ops::Range<usize>) -> impl Strategy<Value = DegreeDistribution<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("some mass", |mut v| {
        v[0] = 0.0;
        let s: f64 = v.iter().sum();
        if s < 1e-3 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= s);
        DegreeDistribution::edge(v).ok()
    })
}

/// Ensembles with a degree-one share on the check side so DE can start.
fn custom_spec() -> impl Strategy<Value = EnsembleSpec<f64>> {
    (edge_dist(2..6), edge_dist(2..8), 0.0f64..0.2, 0.01f64..0.99, 0.0f64..0.9).prop_map(|(lambda, rho, r1, q, p)| {
        let mut rc = rho.coeffs().iter().map(|c| c * (1.0 - r1)).collect::<Vec<_>>();
        rc[0] += r1;
        let rho = DegreeDistribution::edge(rc).unwrap();
        let lt = tilde_lambda(&lambda).unwrap();
        EnsembleSpec {
            construction: Construction::Custom,
            lambda: Curve::Poly(lambda),
            lambda_tilde: Curve::Poly(lt),
            rho: Curve::Poly(rho),
            inner: InnerCode::punctured(p).unwrap(),
            q,
            epsilon: None,
            m_eps: None,
            pilot_fraction: 0.0,
            rate: 0.0,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iowe_rows_sum_to_binomial(params in ldgm_params()) {
        for w in 0..=params.inputs() {
            let mut sum = BigRational::zero();
            for h in 0..=params.n {
                let z = ldgm_iowe(params, w, h).unwrap();
                if (h + params.c * w) % 2 == 1 {
                    prop_assert!(z.is_zero());
                }
                sum += z;
            }
            prop_assert_eq!(sum, BigRational::from_integer(binom(params.inputs(), w)));
        }
    }

    #[test]
    fn ldpc_awd_symmetric_and_even(params in ldpc_params()) {
        let t = ldpc_awd_table(params).unwrap();
        for l in 0..=params.n {
            prop_assert_eq!(t.get(l), t.get(params.n - l));
            if l % 2 == 1 {
                prop_assert!(t.get(l).is_zero());
            }
            prop_assert_eq!(&ldpc_awd(params, l).unwrap(), t.get(l));
        }
        prop_assert_eq!(t, ldpc_awd_table(params).unwrap());
    }

    #[test]
    fn w_o_below_closed_form_bound(i in 0usize..4, a in 1e-6f64..(1.0 - 1e-6)) {
        let (j, k) = MATRIX[i];
        let q = GrowthRateQuery::new(j, k, a).unwrap();
        prop_assert!(w_o(q) <= w_o_upper_bound(q) + 1e-9);
    }

    // Only away from a = 0: the maximization range [a/k, 1 - a/k] is wider
    // for a than for 1 - a, and the extra low-weight inputs win for small a.
    #[test]
    fn w_ub_lower_half_dominated(i in 0usize..4, a in 0.12f64..=0.5) {
        let (j, k) = MATRIX[i];
        prop_assert!(w_ub(a, j, k).unwrap() <= w_ub(1.0 - a, j, k).unwrap() + 1e-9);
    }

    #[test]
    fn entropy_inverse_roundtrip(a in 0.0f64..=0.5) {
        let back = entropy_inverse(binary_entropy(a).unwrap()).unwrap();
        prop_assert!((back - a).abs() < 1e-10, "{a} -> {back}");
    }

    #[test]
    fn de_is_monotone_and_consistent(spec in custom_spec()) {
        let mut s = DeState::all_erased();
        for _ in 0..2000 {
            let n = de_step(s, &spec);
            prop_assert!(n.x3 <= s.x3 + 1e-12);
            s = n;
        }
        let r = run(&spec, 200_000);
        prop_assume!(r.converged);
        let x3 = r.last().x3;
        let f = spec.fixed_point_function(x3).unwrap();
        prop_assert!((f - x3).abs() < 1e-8, "x3={x3} f={f}");
    }

    #[test]
    fn punctured_reduces_to_base(q_prime in 0.05f64..0.95, frac in 0.0f64..0.95, x in 1e-4f64..=1.0) {
        let p = frac * q_prime;
        let base = variable_regular_spec(0.5f64).unwrap();
        let punct = punctured_spec(&base, q_prime, p).unwrap();
        // punctured, sent over (q' - p) / (1 - p), behaves like the base at q'
        prop_assert!((punct.q - (q_prime - p) / (1.0 - p)).abs() < 1e-15);
        let a = punct.fixed_point_function(x).unwrap();
        let b = base.with_channel(q_prime).unwrap().fixed_point_function(x).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn variable_regular_integral_ratio(q in 0.05f64..0.95) {
        // lambda(x) = x^2 integrates to 1/3
        let ratio = variable_regular_rho_integral(q) / (1.0 / 3.0);
        prop_assert!((ratio - q).abs() < 1e-7, "{ratio} vs {q}");
    }

    #[test]
    fn check_regular_integral_ratio(q in (12.0f64 / 13.0)..0.999) {
        // x = 1 - s^2 removes the square-root singularity at x = 1
        let k = 3;
        let n = 20_000;
        let h = 1.0 / n as f64;
        let f = |s: f64| check_regular_lambda_closed_form(k, q, 1.0 - s * s) * 2.0 * s;
        let mut acc = f(0.0) + f(1.0);
        for i in 1..n {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let int_lambda = acc * h / 3.0;
        let ratio = (1.0 / k as f64) / int_lambda;
        prop_assert!((ratio - q).abs() < 1e-7, "{ratio} vs {q}");
    }

    #[test]
    fn guaranteed_rate_is_design_rate(i in 0usize..4) {
        let (j, k) = MATRIX[i];
        if delta_prime::<f64>(j, k).is_ok() {
            prop_assert_eq!(guaranteed_rate::<f64>(j, k).unwrap(), 1.0 - j as f64 / k as f64);
        }
    }

    #[test]
    fn sparse_product_is_linear(
        rows in prop::collection::vec(prop::collection::vec(0usize..12, 0..6), 1..8),
        x in prop::collection::vec(any::<bool>(), 12),
        y in prop::collection::vec(any::<bool>(), 12),
    ) {
        let m = SparseBinaryMatrix::from_rows(rows, 12).unwrap();
        let xy: Vec<bool> = x.iter().zip(&y).map(|(a, b)| a ^ b).collect();
        let lhs = m.mul_vec(&xy);
        let rhs: Vec<bool> = m.mul_vec(&x).iter().zip(m.mul_vec(&y)).map(|(a, b)| a ^ b).collect();
        prop_assert_eq!(lhs, rhs);
        let dense = m.to_dense();
        for (r, row) in dense.iter().enumerate() {
            let v = row.iter().zip(&x).filter(|(a, b)| **a && **b).count() % 2 == 1;
            prop_assert_eq!(v, m.mul_vec(&x)[r]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bp_is_never_wrong_and_ml_dominates(seed in any::<u64>(), q in 0.05f64..0.7, code in 0usize..3) {
        let params = [(24, 3, 6), (32, 2, 4), (48, 3, 6)][code];
        let params = LdpcParams::new(params.0, params.1, params.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = CodeInstance::gallager(params, seed);
        let outer = c.encoder().random_codeword(&mut rng);
        let sent = c.transmit(&outer);
        let rx = ChannelRealization::sample(params.n, q, &mut rng);
        let bp = bp_decode(&c, &rx, &sent, 100);
        let ml = ml_decode_bec(&c, &rx, &sent);
        prop_assert_eq!(bp.wrong_bits(&sent), 0);
        prop_assert_eq!(ml.wrong_bits(&sent), 0);
        prop_assert!(ml.residual <= bp.residual);
        prop_assert!(!bp.failure || bp.residual > 0);
        if !bp.failure {
            prop_assert!(!ml.failure);
        }
        prop_assert_eq!(bp, bp_decode(&c, &rx, &sent, 100));
        prop_assert_eq!(ml, ml_decode_bec(&c, &rx, &sent));
    }

    #[test]
    fn truncated_ensembles_decode_without_errors(seed in any::<u64>(), q in 0.1f64..0.45) {
        let rho = variable_regular_rho(0.5f64, 1 << 12).unwrap();
        let spec = truncate_variable_regular(&rho, 0.5, 0.2).unwrap();
        let c = CodeInstance::from_ensemble(&spec, 600, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let outer = c.encoder().random_codeword(&mut rng);
        prop_assert!(c.is_codeword(&outer));
        let sent = c.transmit(&outer);
        let rx = ChannelRealization::sample(600, q, &mut rng);
        let bp = bp_decode(&c, &rx, &sent, 200);
        let ml = ml_decode_bec(&c, &rx, &sent);
        prop_assert_eq!(bp.wrong_bits(&sent), 0);
        prop_assert_eq!(ml.wrong_bits(&sent), 0);
        prop_assert!(ml.residual <= bp.residual);
    }
}

/// `w_ub(a) > w_ub(1 - a)` near `a = 0`, and the finite-length bound
/// agrees, so this is not a numerical artifact.
#[test]
fn w_ub_reflection_fails_for_small_a() {
    use ldpcgm::enumerator::concat_awd_ub_ln_table;
    let (j, k) = (3, 6);
    assert_eq!(w_ub(0.0, j, k).unwrap(), 0.0);
    assert!((w_ub(1.0, j, k).unwrap() + 0.5 * std::f64::consts::LN_2).abs() < 1e-9);
    let n = 480;
    let t = concat_awd_ub_ln_table(LdpcParams::new(n, j, k).unwrap()).unwrap();
    let (lo, hi) = (24, n - 24);
    assert!(t[lo] > t[hi]);
    assert!((t[lo] / n as f64 - w_ub(0.05, j, k).unwrap()).abs() < 0.002);
    assert!((t[hi] / n as f64 - w_ub(0.95, j, k).unwrap()).abs() < 0.002);
}

#[test]
fn check_regular_series_resums_to_closed_form() {
    let lambda = check_regular_lambda(3, 0.95f64, 400).unwrap();
    for x in [0.1, 0.5, 0.9] {
        let exact = check_regular_lambda_closed_form(3, 0.95, x);
        assert!((lambda.eval(x) - exact).abs() < 1e-6, "x={x}");
    }
    let spec = check_regular_spec(&lambda, 3, 0.95).unwrap();
    for x in [0.1, 0.5, 0.9] {
        assert!((spec.fixed_point_function(x).unwrap() - x).abs() < 1e-6);
    }
}
