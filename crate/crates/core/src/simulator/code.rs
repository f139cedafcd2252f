use rand::Rng;

use super::gf2::BitMatrix;
use super::sample::{configuration_model, largest_remainder, rng_from, sample_ldgm_with, sample_ldpc_with};
use super::SparseBinaryMatrix;
use crate::density_evolution::{Construction, EnsembleSpec};
use crate::enumerator::{LdgmParams, LdpcParams};
use crate::error::{Error, Result};

/// One sampled LDPC-GM code: outer parity checks on `n` variables, and an
/// inner rate-1 LDGM map from those variables to the `n` transmitted bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeInstance {
    pub h_outer: SparseBinaryMatrix,
    /// Row `r` lists the outer variables XORed into transmitted bit `r`.
    pub g_inner: SparseBinaryMatrix,
    /// Outer variables fixed to zero and known to the decoder.
    pub pilots: Vec<bool>,
    /// Set for Gallager outer codes.
    pub ldpc: Option<LdpcParams>,
    pub ldgm: LdgmParams,
    pub seed: u64,
}

impl CodeInstance {
    /// Gallager `(n, j, k)` outer code with the `(k, k)` inner LDGM code,
    /// both sampled independently from one seeded stream.
    pub fn gallager(params: LdpcParams, seed: u64) -> Self {
        let mut rng = rng_from(seed);
        let h_outer = sample_ldpc_with(params, &mut rng);
        let ldgm = params.inner_ldgm();
        let g_inner = sample_ldgm_with(ldgm, &mut rng).matrix;
        CodeInstance { h_outer, g_inner, pilots: vec![false; params.n], ldpc: Some(params), ldgm, seed }
    }

    /// Configuration-model sample of a truncated ensemble with the `(2, 2)`
    /// inner code. Variable node counts come from largest-remainder
    /// rounding and pilots share the leftover edge mass of `lambda`; check
    /// counts are rounded against the socket budget, and any deficit is
    /// made up with degree-one checks.
    pub fn from_ensemble(spec: &EnsembleSpec<f64>, n: usize, seed: u64) -> Result<Self> {
        if matches!(spec.construction, Construction::Punctured { .. }) {
            return Err(Error::invalid("sampling supports unpunctured ensembles only"));
        }
        let (Some(lambda), Some(lt), Some(rho)) =
            (spec.lambda.as_poly(), spec.lambda_tilde.as_poly(), spec.rho.as_poly())
        else {
            return Err(Error::invalid("sampling needs polynomial (truncated) degree distributions"));
        };
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::invalid(format!("block length {n} must be positive and even")));
        }
        let mut rng = rng_from(seed);

        let mut weights = lt.coeffs().to_vec();
        let pilot_weight = (1.0 - lt.mass()).max(0.0);
        weights.push(pilot_weight);
        let counts = largest_remainder(&weights, n);
        let pilot_count = *counts.last().expect("pilot slot");
        let mut var_degrees = Vec::with_capacity(n);
        for (d, &c) in counts[..counts.len() - 1].iter().enumerate() {
            var_degrees.extend(std::iter::repeat_n(d, c));
        }
        let plain_edges: usize = var_degrees.iter().sum();
        if pilot_count > 0 {
            let pilot_edge_frac = (1.0 - lambda.mass()).clamp(0.0, 1.0 - 1e-12);
            let total = plain_edges as f64 / (1.0 - pilot_edge_frac);
            let pilot_edges = ((total - plain_edges as f64).round() as usize).max(pilot_count);
            let base = pilot_edges / pilot_count;
            let extra = pilot_edges % pilot_count;
            var_degrees.extend((0..pilot_count).map(|i| base + usize::from(i < extra)));
        }
        let edges: usize = var_degrees.iter().sum();

        let rc = rho.coeffs();
        let node_weights: Vec<f64> = rc.iter().enumerate().map(|(i, r)| r / (i + 1) as f64).collect();
        let mut check_degrees = Vec::new();
        for (i, &c) in edge_budget_rounding(&node_weights, edges).iter().enumerate() {
            check_degrees.extend(std::iter::repeat_n(i + 1, c));
        }
        let mut socket_total: usize = check_degrees.iter().sum();
        while socket_total < edges {
            check_degrees.insert(0, 1);
            socket_total += 1;
        }
        while socket_total > edges {
            if check_degrees.first() == Some(&1) {
                check_degrees.remove(0);
            } else {
                *check_degrees.last_mut().expect("checks remain") -= 1;
                check_degrees.sort_unstable();
            }
            socket_total -= 1;
        }
        check_degrees.retain(|&d| d > 0);

        let h_outer = configuration_model(&var_degrees, &check_degrees, &mut rng)?;
        let ldgm = LdgmParams::new(2, 2, n)?;
        let g_inner = sample_ldgm_with(ldgm, &mut rng).matrix;
        let mut pilots = vec![false; n];
        for p in pilots.iter_mut().skip(n - pilot_count) {
            *p = true;
        }
        Ok(CodeInstance { h_outer, g_inner, pilots, ldpc: None, ldgm, seed })
    }

    /// Number of outer variables.
    pub fn n(&self) -> usize {
        self.h_outer.ncols()
    }

    pub fn pilot_count(&self) -> usize {
        self.pilots.iter().filter(|&&p| p).count()
    }

    /// Systematic encoder from one GF(2) elimination of `H` (with a unit
    /// row per pilot).
    pub fn encoder(&self) -> Encoder {
        let n = self.n();
        let mut m = BitMatrix::new(n);
        for row in self.h_outer.rows() {
            m.push_row(row.iter().copied());
        }
        for (i, _) in self.pilots.iter().enumerate().filter(|(_, &p)| p) {
            m.push_row([i]);
        }
        let pivots = m.rref(n);
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let message_positions = (0..n).filter(|&c| !is_pivot[c]).collect();
        let nominal = match self.ldpc {
            Some(p) => n - p.checks(),
            None => n.saturating_sub(self.h_outer.nrows() + self.pilot_count()),
        };
        Encoder { rref: m, pivots, message_positions, nominal_dimension: nominal, n }
    }

    /// Transmitted word for an outer codeword.
    pub fn transmit(&self, outer: &[bool]) -> Vec<bool> {
        self.g_inner.mul_vec(outer)
    }

    pub fn is_codeword(&self, outer: &[bool]) -> bool {
        self.h_outer.mul_vec(outer).iter().all(|b| !b)
            && self.pilots.iter().zip(outer).all(|(&p, &v)| !(p && v))
    }
}

/// Check counts for `edges` sockets, class `i` having degree `i + 1` and
/// exact count `edges * w_i / sum(w)`: floors, then one more node per
/// class in order of decreasing remainder while the socket budget allows.
/// Leftover sockets are returned to the caller as a deficit.
fn edge_budget_rounding(node_weights: &[f64], edges: usize) -> Vec<usize> {
    let mass: f64 = node_weights.iter().enumerate().map(|(i, w)| w * (i + 1) as f64).sum();
    let exact: Vec<f64> = node_weights.iter().map(|w| w / mass * edges as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let used: usize = counts.iter().enumerate().map(|(i, c)| c * (i + 1)).sum();
    let mut budget = edges.saturating_sub(used);
    let mut order: Vec<usize> = (0..exact.len()).filter(|&i| exact[i] > exact[i].floor()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    for i in order {
        if i < budget {
            counts[i] += 1;
            budget -= i + 1;
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoder {
    rref: BitMatrix,
    pivots: Vec<usize>,
    /// Coordinates that carry the message unchanged.
    pub message_positions: Vec<usize>,
    /// `n - (number of checks)`: the dimension if `H` had full rank.
    pub nominal_dimension: usize,
    n: usize,
}

impl Encoder {
    pub fn dimension(&self) -> usize {
        self.message_positions.len()
    }

    /// True rate `dimension / n`.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n as f64
    }

    /// Extra dimensions from linearly dependent checks.
    pub fn rank_deficiency(&self) -> usize {
        self.dimension().saturating_sub(self.nominal_dimension)
    }

    pub fn encode(&self, message: &[bool]) -> Result<Vec<bool>> {
        if message.len() != self.dimension() {
            return Err(Error::invalid(format!(
                "message has {} bits, code dimension is {}",
                message.len(),
                self.dimension()
            )));
        }
        let mut v = vec![false; self.n];
        let mut packed = vec![0u64; self.n.div_ceil(64)];
        for (&pos, &bit) in self.message_positions.iter().zip(message) {
            v[pos] = bit;
            if bit {
                packed[pos / 64] |= 1 << (pos % 64);
            }
        }
        for (r, &p) in self.pivots.iter().enumerate() {
            let parity = self
                .rref
                .row_words(r)
                .iter()
                .zip(&packed)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            v[p] = parity == 1;
        }
        Ok(v)
    }

    pub fn random_codeword<R: Rng>(&self, rng: &mut R) -> Vec<bool> {
        let msg: Vec<bool> = (0..self.dimension()).map(|_| rng.gen()).collect();
        self.encode(&msg).expect("message length matches dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density_evolution::{truncate_variable_regular, variable_regular_rho};

    #[test]
    fn gallager_instance_shapes() {
        let p = LdpcParams::new(16, 3, 4).unwrap();
        let c = CodeInstance::gallager(p, 3);
        assert_eq!(c.h_outer.nrows(), 12);
        assert_eq!(c.g_inner.nrows(), 16);
        assert_eq!(c.g_inner.ncols(), 16);
        assert_eq!(c, CodeInstance::gallager(p, 3));
    }

    #[test]
    fn encoder_produces_codewords() {
        let p = LdpcParams::new(36, 3, 6).unwrap();
        let c = CodeInstance::gallager(p, 11);
        let e = c.encoder();
        assert!(e.dimension() >= e.nominal_dimension);
        let mut rng = rng_from(5);
        for _ in 0..20 {
            let v = e.random_codeword(&mut rng);
            assert!(c.is_codeword(&v));
        }
        assert!(e.encode(&vec![false; e.dimension()]).unwrap().iter().all(|b| !b));
        assert!(e.encode(&[]).is_err() || e.dimension() == 0);
    }

    #[test]
    fn ensemble_instance_counts() {
        let q = 0.5;
        let rho = variable_regular_rho(q, 1 << 15).unwrap();
        let spec = truncate_variable_regular(&rho, q, 0.05).unwrap();
        let c = CodeInstance::from_ensemble(&spec, 2000, 1).unwrap();
        let w = c.h_outer.col_weights();
        let edges = c.h_outer.nnz() + 2 * c.h_outer.cancelled();
        assert_eq!(edges, 6000);
        assert!(w.iter().all(|&d| d <= 3));
        assert_eq!(c.pilot_count(), 0);
        let checks = c.h_outer.nrows() as f64;
        assert!((checks / 2000.0 - 3.0 * (1.0 - spec.rate) / 3.0).abs() < 0.05, "{checks}");
        let e = c.encoder();
        let v = e.random_codeword(&mut rng_from(2));
        assert!(c.is_codeword(&v));
    }
}
