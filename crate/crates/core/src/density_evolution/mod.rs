//! Density evolution on the BEC for LDPC-GM ensembles.
//!
//! Four erasure probabilities are tracked per iteration:
//! `x1` (LDGM check to variable), `x2` (LDPC variable to check),
//! `x3` (LDPC check to variable) and `x4` (variable to LDGM check).

mod constructions;
mod spec_file;

pub use constructions::{
    check_regular_lambda, check_regular_lambda_closed_form, check_regular_spec, decoding_complexity,
    decoding_complexity_actual, punctured_spec,
    truncate_check_regular, truncate_variable_regular, variable_regular_closed_form, variable_regular_closed_form_check,
    variable_regular_rho, variable_regular_rho_at, variable_regular_rho_integral, variable_regular_spec,
};
pub use spec_file::{ConstructionName, SpecFile, DEFAULT_DEGREE_CAP, DEFAULT_RHO_CAP};

use crate::error::{Error, Result};
use crate::optimize::golden_section_min;
use crate::scalar::Real;
use crate::series;

/// Round-off allowance for series coefficients.
pub const CLAMP_TOL: f64 = 1e-12;
/// Allowed deviation of an edge distribution's total mass from 1.
pub const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perspective {
    /// `coeffs[i]` is the fraction of edges attached to degree-`(i+1)`
    /// nodes (the coefficient of `x^i`).
    Edge,
    /// `coeffs[i]` is the fraction of nodes of degree `i`.
    Node,
}

/// Degree distribution stored as polynomial coefficients, `coeffs[i]`
/// multiplying `x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution<T> {
    coeffs: Vec<T>,
    perspective: Perspective,
    clamped: usize,
}

impl<T: Real> DegreeDistribution<T> {
    fn build(mut coeffs: Vec<T>, perspective: Perspective, allow_deficit: bool) -> Result<Self> {
        let tol = T::of(CLAMP_TOL);
        let mut clamped = 0;
        for (i, c) in coeffs.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(Error::Numerical(format!("coefficient of x^{i} is {c}")));
            }
            if *c < -tol {
                return Err(Error::invalid(format!(
                    "negative coefficient {c} at x^{i}; the distribution is not valid"
                )));
            }
            if *c < T::zero() {
                *c = T::zero();
                clamped += 1;
            }
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&T::zero()) {
            coeffs.pop();
        }
        let mass: T = coeffs.iter().copied().sum();
        let mtol = T::of(MASS_TOL);
        let ok = if allow_deficit {
            mass <= T::one() + mtol && mass > T::zero()
        } else {
            (mass - T::one()).abs() <= mtol
        };
        if !ok {
            return Err(Error::invalid(format!("degree distribution has total mass {mass}")));
        }
        Ok(DegreeDistribution { coeffs, perspective, clamped })
    }

    /// Edge-perspective distribution whose coefficients sum to one.
    pub fn edge(coeffs: Vec<T>) -> Result<Self> {
        Self::build(coeffs, Perspective::Edge, false)
    }

    /// Edge-perspective coefficients with total mass at most one: a series
    /// cut at a degree cap, or a pilot-truncated distribution.
    pub fn edge_partial(coeffs: Vec<T>) -> Result<Self> {
        Self::build(coeffs, Perspective::Edge, true)
    }

    pub fn node(coeffs: Vec<T>) -> Result<Self> {
        Self::build(coeffs, Perspective::Node, false)
    }

    pub fn node_partial(coeffs: Vec<T>) -> Result<Self> {
        Self::build(coeffs, Perspective::Node, true)
    }

    /// `x^(d-1)` (edge) or `x^d` (node).
    pub fn regular(d: usize, perspective: Perspective) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("regular degree must be positive"));
        }
        let power = match perspective {
            Perspective::Edge => d - 1,
            Perspective::Node => d,
        };
        let mut c = vec![T::zero(); power + 1];
        c[power] = T::one();
        Self::build(c, perspective, false)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn perspective(&self) -> Perspective {
        self.perspective
    }

    /// Number of coefficients in `[-1e-12, 0)` that were set to zero.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn mass(&self) -> T {
        self.coeffs.iter().copied().sum()
    }

    /// Fraction of edges (or nodes) of degree `d`.
    pub fn fraction(&self, d: usize) -> T {
        let idx = match self.perspective {
            Perspective::Edge => match d.checked_sub(1) {
                Some(i) => i,
                None => return T::zero(),
            },
            Perspective::Node => d,
        };
        self.coeffs.get(idx).copied().unwrap_or_else(T::zero)
    }

    /// Largest degree with a nonzero fraction.
    pub fn max_degree(&self) -> usize {
        let top = self.coeffs.len() - 1;
        match self.perspective {
            Perspective::Edge => top + 1,
            Perspective::Node => top,
        }
    }

    pub fn eval(&self, x: T) -> T {
        series::eval(&self.coeffs, x)
    }

    /// `sum_i lambda_i / i` (edge perspective), the integral over `[0, 1]`.
    pub fn integral(&self) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c / T::of_usize(i + 1))
            .sum()
    }
}

/// Node-perspective version of an edge distribution:
/// `lambda~_i = (lambda_i / i) / sum_j (lambda_j / j)`.
pub fn tilde_lambda<T: Real>(lambda: &DegreeDistribution<T>) -> Result<DegreeDistribution<T>> {
    if lambda.perspective != Perspective::Edge {
        return Err(Error::invalid("tilde_lambda expects an edge-perspective distribution"));
    }
    let norm = lambda.integral();
    if !(norm > T::zero()) {
        return Err(Error::invalid("distribution has zero mass"));
    }
    let mut c = vec![T::zero(); lambda.coeffs.len() + 1];
    for (i, &l) in lambda.coeffs.iter().enumerate() {
        c[i + 1] = l / T::of_usize(i + 1) / norm;
    }
    DegreeDistribution::node(c)
}

/// Function appearing in the DE recursion: either a polynomial or one of
/// the closed forms used when no finite series is exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve<T> {
    Poly(DegreeDistribution<T>),
    /// Untruncated variable-regular `rho` at design channel `q`.
    VariableRegularRho { q: T },
    /// Untruncated check-regular `lambda`.
    CheckRegularLambda { k: usize, q: T },
}

impl<T: Real> Curve<T> {
    pub fn eval(&self, x: T) -> T {
        match self {
            Curve::Poly(d) => d.eval(x),
            Curve::VariableRegularRho { q } => variable_regular_rho_at(*q, x),
            Curve::CheckRegularLambda { k, q } => check_regular_lambda_closed_form(*k, *q, x),
        }
    }

    pub fn as_poly(&self) -> Option<&DegreeDistribution<T>> {
        match self {
            Curve::Poly(d) => Some(d),
            _ => None,
        }
    }
}

/// Which construction a spec came from; drives complexity accounting.
#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    CheckRegular { k: usize },
    VariableRegular,
    Punctured { base: Box<Construction>, p: f64, q_prime: f64 },
    Custom,
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::CheckRegular { .. } => "check-regular",
            Construction::VariableRegular => "variable-regular",
            Construction::Punctured { .. } => "punctured",
            Construction::Custom => "custom",
        }
    }
}

/// Inner LDGM code as seen by DE: `F` (node perspective) and its edge
/// version `f = F' / F'(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerCode<T> {
    pub f_node: DegreeDistribution<T>,
    f_edge: Vec<T>,
    /// Inner check degree distribution (node perspective).
    pub g_node: DegreeDistribution<T>,
}

impl<T: Real> InnerCode<T> {
    pub fn new(f_node: DegreeDistribution<T>, g_node: DegreeDistribution<T>) -> Result<Self> {
        let c = f_node.coeffs();
        let dsum: T = c.iter().enumerate().map(|(i, &x)| x * T::of_usize(i)).sum();
        if !(dsum > T::zero()) {
            return Err(Error::invalid("inner distribution F has no edges"));
        }
        let f_edge = (1..c.len()).map(|i| c[i] * T::of_usize(i) / dsum).collect();
        Ok(InnerCode { f_node, f_edge, g_node })
    }

    /// Rate-1 `(2, 2)` code, `F(x) = G(x) = x^2`.
    pub fn base() -> Self {
        Self::punctured(T::zero()).expect("p = 0 is valid")
    }

    /// `F(x) = [x(1-p) + p]^2`, `G(x) = x^2`.
    pub fn punctured(p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::invalid(format!("puncturing fraction {p} outside [0, 1]")));
        }
        let one = T::one();
        let two = T::of(2.0);
        let f = vec![p * p, two * p * (one - p), (one - p) * (one - p)];
        let g = DegreeDistribution::regular(2, Perspective::Node)?;
        Self::new(DegreeDistribution::node(f)?, g)
    }

    pub fn big_f(&self, x: T) -> T {
        self.f_node.eval(x)
    }

    pub fn small_f(&self, x: T) -> T {
        series::eval(&self.f_edge, x)
    }

    /// `F'(1)`.
    pub fn f_prime_one(&self) -> T {
        series::eval_derivative(self.f_node.coeffs(), T::one())
    }

    /// `G'(1)`.
    pub fn g_prime_one(&self) -> T {
        series::eval_derivative(self.g_node.coeffs(), T::one())
    }
}

/// Everything DE needs about an ensemble, plus its rate bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec<T> {
    pub construction: Construction,
    pub lambda: Curve<T>,
    /// Node-perspective `lambda~`, including any pilot mass deficit.
    pub lambda_tilde: Curve<T>,
    pub rho: Curve<T>,
    pub inner: InnerCode<T>,
    /// Channel erasure probability.
    pub q: T,
    pub epsilon: Option<T>,
    /// Truncation degree `M(epsilon)`.
    pub m_eps: Option<usize>,
    /// Fraction of outer variable nodes turned into pilots.
    pub pilot_fraction: T,
    /// Design rate of the ensemble.
    pub rate: T,
}

impl<T: Real> EnsembleSpec<T> {
    /// Same ensemble on another channel.
    pub fn with_channel(&self, q: T) -> Result<Self> {
        check_probability(q, "erasure probability")?;
        Ok(EnsembleSpec { q, ..self.clone() })
    }

    /// `x1` at a fixed point, given `lambda~(x3)`: the solution of
    /// `x1 = 1 - (1-q)(1 - f(x1) lambda~(x3))`.
    fn fixed_x1(&self, lt: T) -> Result<T> {
        let one = T::one();
        let q = self.q;
        let fe = &self.inner.f_edge;
        if fe.len() <= 2 {
            let f0 = fe.first().copied().unwrap_or_else(T::zero);
            let f1 = fe.get(1).copied().unwrap_or_else(T::zero);
            let den = one - (one - q) * f1 * lt;
            if !(den > T::of(1e-300)) {
                return Err(Error::Numerical(format!("fixed-point denominator {den} underflows")));
            }
            return Ok((q + (one - q) * f0 * lt) / den);
        }
        let mut x = one;
        for _ in 0..100_000 {
            let nx = one - (one - q) * (one - self.inner.small_f(x) * lt);
            if (nx - x).abs() <= T::of(1e-15) {
                return Ok(nx);
            }
            x = nx;
        }
        Err(Error::Numerical("inner fixed point did not converge".into()))
    }

    /// Right-hand side `1 - rho(1 - F(x1) lambda(x3))` of the fixed-point
    /// equation, with `x1` eliminated.
    pub fn fixed_point_function(&self, x3: T) -> Result<T> {
        let lt = self.lambda_tilde.eval(x3);
        let x1 = self.fixed_x1(lt)?;
        let x2 = self.inner.big_f(x1) * self.lambda.eval(x3);
        Ok(T::one() - self.rho.eval(T::one() - x2))
    }
}

pub(crate) fn check_probability<T: Real>(v: T, what: &str) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} {v} outside [0, 1]")))
    }
}

/// Erasure probabilities on the four edge classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeState<T> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
    pub x4: T,
}

impl<T: Real> DeState<T> {
    pub fn new(x1: T, x2: T, x3: T, x4: T) -> Result<Self> {
        for (v, name) in [(x1, "x1"), (x2, "x2"), (x3, "x3"), (x4, "x4")] {
            check_probability(v, name)?;
        }
        Ok(DeState { x1, x2, x3, x4 })
    }

    pub fn all_erased() -> Self {
        let one = T::one();
        DeState { x1: one, x2: one, x3: one, x4: one }
    }
}

/// One DE iteration in the order `x1 -> x2 -> x3 -> x4`.
pub fn de_step<T: Real>(state: DeState<T>, spec: &EnsembleSpec<T>) -> DeState<T> {
    let one = T::one();
    let x1 = one - (one - spec.q) * (one - state.x4);
    let x2 = spec.inner.big_f(x1) * spec.lambda.eval(state.x3);
    // rho(1) may exceed one by rounding
    let x3 = (one - spec.rho.eval(one - x2)).max(T::zero());
    let x4 = spec.inner.small_f(x1) * spec.lambda_tilde.eval(x3);
    DeState { x1, x2, x3, x4 }
}

/// Probability that an outer variable node is still erased,
/// `F(x1) lambda~(x3)`.
pub fn variable_erasure<T: Real>(state: &DeState<T>, spec: &EnsembleSpec<T>) -> T {
    spec.inner.big_f(state.x1) * spec.lambda_tilde.eval(state.x3)
}

/// Stop once `|x3_{t+1} - x3_t|` falls below this.
pub const DE_TOL: f64 = 1e-12;
pub const DE_MAX_ITERS: usize = 100_000;
/// `x3` below this counts as decoding success.
pub const DE_SUCCESS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DeRun<T> {
    /// States after each iteration; `states[0]` is the starting point.
    pub states: Vec<DeState<T>>,
    pub converged: bool,
}

impl<T: Real> DeRun<T> {
    pub fn last(&self) -> DeState<T> {
        *self.states.last().expect("a run holds at least its start")
    }

    pub fn iterations(&self) -> usize {
        self.states.len() - 1
    }

    pub fn success(&self) -> bool {
        self.last().x3 < T::of(DE_SUCCESS)
    }
}

/// Iterates [`de_step`] from all-erased messages until `x3` settles or
/// `max_iters` steps have run.
pub fn run<T: Real>(spec: &EnsembleSpec<T>, max_iters: usize) -> DeRun<T> {
    let mut states = vec![DeState::all_erased()];
    let tol = T::of(DE_TOL);
    let mut converged = false;
    for _ in 0..max_iters {
        let prev = *states.last().expect("nonempty");
        let next = de_step(prev, spec);
        states.push(next);
        if (next.x3 - prev.x3).abs() < tol {
            converged = true;
            break;
        }
    }
    DeRun { states, converged }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin<T> {
    /// `min_x3 [x3 - fixed_point_function(x3)]`.
    pub value: T,
    pub at: T,
}

/// Minimum of `x3 - fixed_point_function(x3)` over a uniform grid of
/// `(0, 1]`, refined by golden-section search around the grid minimum.
/// A positive value certifies BP success.
pub fn fixed_point_margin<T: Real>(spec: &EnsembleSpec<T>, grid: usize) -> Result<Margin<T>> {
    if grid < 1000 {
        return Err(Error::invalid(format!("margin grid {grid} must be at least 1000")));
    }
    let g = |x: T| spec.fixed_point_function(x).map(|v| x - v);
    let mut best = Margin { value: T::infinity(), at: T::one() };
    let mut best_i = grid;
    for i in 1..=grid {
        let x = T::of_usize(i) / T::of_usize(grid);
        let v = g(x)?;
        if v < best.value {
            best = Margin { value: v, at: x };
            best_i = i;
        }
    }
    let lo = T::of_usize(best_i - 1) / T::of_usize(grid);
    let hi = T::of_usize((best_i + 1).min(grid)) / T::of_usize(grid);
    let lo = if best_i == 1 { lo + T::of(1e-3) / T::of_usize(grid) } else { lo };
    let r = golden_section_min(|x| g(x).unwrap_or_else(|_| T::infinity()), lo, hi, T::of(1e-12), 100);
    if r.fx < best.value {
        best = Margin { value: r.fx, at: r.x };
    }
    Ok(best)
}
