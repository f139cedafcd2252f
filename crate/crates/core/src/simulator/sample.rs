//! Random graph samplers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SparseBinaryMatrix;
use crate::enumerator::{LdgmParams, LdpcParams};
use crate::error::{Error, Result};

pub(crate) fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gallager's layered `(n, j, k)` parity-check matrix: `j` stacked blocks,
/// each a uniformly random column permutation of the block whose row `r`
/// covers columns `rk .. rk+k`.
pub fn sample_ldpc(params: LdpcParams, seed: u64) -> SparseBinaryMatrix {
    sample_ldpc_with(params, &mut rng_from(seed))
}

pub fn sample_ldpc_with<R: Rng>(params: LdpcParams, rng: &mut R) -> SparseBinaryMatrix {
    let LdpcParams { n, j, k } = params;
    let mut rows = Vec::with_capacity(params.checks());
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..j {
        perm.shuffle(rng);
        rows.extend(perm.chunks(k).map(<[usize]>::to_vec));
    }
    SparseBinaryMatrix::from_rows(rows, n).expect("permutation entries are in range")
}

/// Variable sockets in uniformly random order; consecutive runs are then
/// handed to the checks in turn.
fn socket_matching<R: Rng>(var_degrees: &[usize], rng: &mut R) -> Vec<usize> {
    let mut sockets: Vec<usize> =
        var_degrees.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat_n(v, d)).collect();
    sockets.shuffle(rng);
    sockets
}

fn rows_from_sockets(sockets: &[usize], check_degrees: &[usize]) -> Vec<Vec<usize>> {
    let mut rows = Vec::with_capacity(check_degrees.len());
    let mut at = 0;
    for &d in check_degrees {
        rows.push(sockets[at..at + d].to_vec());
        at += d;
    }
    rows
}

/// Sampled regular LDGM code: row `r` lists the inputs XORed into output
/// `r`. Input sockets (`c` per input) are matched uniformly to output
/// sockets (`d` per output); parallel edges cancel in pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdgmSample {
    pub matrix: SparseBinaryMatrix,
    /// Input attached to each output socket before cancellation.
    pub sockets: Vec<usize>,
}

pub fn sample_ldgm(params: LdgmParams, seed: u64) -> LdgmSample {
    sample_ldgm_with(params, &mut rng_from(seed))
}

pub fn sample_ldgm_with<R: Rng>(params: LdgmParams, rng: &mut R) -> LdgmSample {
    let inputs = params.inputs();
    let sockets = socket_matching(&vec![params.c; inputs], rng);
    let rows = rows_from_sockets(&sockets, &vec![params.d; params.n]);
    let matrix = SparseBinaryMatrix::from_rows(rows, inputs).expect("socket entries are in range");
    LdgmSample { matrix, sockets }
}

/// Parity-check matrix from a configuration model: variable `v` gets
/// `var_degrees[v]` sockets, check `r` gets `check_degrees[r]`, matched
/// uniformly at random.
pub fn configuration_model<R: Rng>(
    var_degrees: &[usize],
    check_degrees: &[usize],
    rng: &mut R,
) -> Result<SparseBinaryMatrix> {
    let ev: usize = var_degrees.iter().sum();
    let ec: usize = check_degrees.iter().sum();
    if ev != ec {
        return Err(Error::invalid(format!("socket counts differ: {ev} variable vs {ec} check")));
    }
    let sockets = socket_matching(var_degrees, rng);
    SparseBinaryMatrix::from_rows(rows_from_sockets(&sockets, check_degrees), var_degrees.len())
}

/// Integer counts summing to `total` with `counts[i] ~ total * weights[i]
/// / sum(weights)`: floors first, then the largest remainders get one more
/// (ties to the lower index).
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if total == 0 || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ldpc_degrees_and_determinism() {
        let p = LdpcParams::new(8, 2, 4).unwrap();
        let h = sample_ldpc(p, 1);
        assert_eq!(h.nrows(), 4);
        assert!(h.row_weights().iter().all(|&w| w == 4));
        assert!(h.col_weights().iter().all(|&w| w == 2));
        assert_eq!(h, sample_ldpc(p, 1));
        let big = LdpcParams::new(96, 3, 6).unwrap();
        assert_ne!(sample_ldpc(big, 1), sample_ldpc(big, 2));
    }

    #[test]
    fn ldgm_socket_counts() {
        let p = LdgmParams::new(2, 2, 4).unwrap();
        let s = sample_ldgm(p, 7);
        assert_eq!(s.sockets.len(), 8);
        let w = s.matrix.col_weights();
        assert!(w.iter().all(|&c| c <= 2));
        assert_eq!(s.matrix.nnz() + 2 * s.matrix.cancelled(), 8);
    }

    #[test]
    fn remainder_rounding() {
        assert_eq!(largest_remainder(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[0.5, 0.25, 0.25], 4), vec![2, 1, 1]);
        assert_eq!(largest_remainder(&[0.7, 0.3], 0), vec![0, 0]);
        assert_eq!(largest_remainder(&[0.3, 0.7], 3).iter().sum::<usize>(), 3);
    }

    #[test]
    fn configuration_model_rejects_mismatch() {
        let mut rng = rng_from(0);
        assert!(configuration_model(&[2, 2], &[3], &mut rng).is_err());
        let h = configuration_model(&[1, 1, 2], &[2, 2], &mut rng).unwrap();
        assert_eq!(h.nnz() + 2 * h.cancelled(), 4);
    }
}
