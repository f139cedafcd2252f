//! Erasure decoders for a [`CodeInstance`].

use super::gf2::BitMatrix;
use super::{ChannelRealization, CodeInstance, DecoderKind};

/// Outcome of one decoding attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub decoder: DecoderKind,
    /// Erased transmitted bits left unrecovered.
    pub residual: usize,
    pub failure: bool,
    pub iterations: usize,
    /// Non-pilot outer variables left undetermined.
    pub unresolved_variables: usize,
    /// BP only: unresolved non-pilot outer variables before the first
    /// iteration and after each one.
    pub trajectory: Vec<usize>,
    /// Estimate of the transmitted word; `None` where still erased.
    pub estimate: Vec<Option<bool>>,
}

impl TrialResult {
    /// Recovered bits that disagree with `sent`.
    pub fn wrong_bits(&self, sent: &[bool]) -> usize {
        self.estimate.iter().zip(sent).filter(|(e, s)| matches!(e, Some(b) if b != *s)).count()
    }
}

/// Edge lists of the joint factor graph.
struct Graph {
    /// LDPC edges grouped by check: `ldpc_ptr[r] .. ldpc_ptr[r+1]`.
    ldpc_ptr: Vec<usize>,
    ldpc_var: Vec<usize>,
    /// LDPC edge ids of each variable.
    var_ldpc: Vec<Vec<usize>>,
    ldgm_ptr: Vec<usize>,
    ldgm_var: Vec<usize>,
    var_ldgm: Vec<Vec<usize>>,
}

impl Graph {
    fn new(code: &CodeInstance) -> Self {
        let n = code.n();
        let csr = |m: &super::SparseBinaryMatrix| {
            let mut ptr = vec![0];
            let mut var = Vec::with_capacity(m.nnz());
            let mut by_var = vec![Vec::new(); n];
            for row in m.rows() {
                for &v in row {
                    by_var[v].push(var.len());
                    var.push(v);
                }
                ptr.push(var.len());
            }
            (ptr, var, by_var)
        };
        let (ldpc_ptr, ldpc_var, var_ldpc) = csr(&code.h_outer);
        let (ldgm_ptr, ldgm_var, var_ldgm) = csr(&code.g_inner);
        Graph { ldpc_ptr, ldpc_var, var_ldpc, ldgm_ptr, ldgm_var, var_ldgm }
    }
}

/// All-but-one combination at a check: each outgoing message is known iff
/// every other incoming one is, with the XOR of the others as its value.
fn check_update(incoming: &[Option<bool>], seed: Option<bool>, out: &mut [Option<bool>]) {
    let Some(base) = seed else {
        out.iter_mut().for_each(|m| *m = None);
        return;
    };
    let unknown = incoming.iter().filter(|m| m.is_none()).count();
    let parity = incoming.iter().fold(base, |acc, m| acc ^ m.unwrap_or(false));
    for (o, i) in out.iter_mut().zip(incoming) {
        *o = match (unknown, i) {
            (0, Some(b)) => Some(parity ^ b),
            (1, None) => Some(parity),
            _ => None,
        };
    }
}

/// Value of a variable from any known source other than `skip`.
fn variable_value(
    pilot: bool,
    ldgm_in: impl Iterator<Item = (usize, Option<bool>)>,
    ldpc_in: impl Iterator<Item = (usize, Option<bool>)>,
    skip: Option<usize>,
) -> Option<bool> {
    if pilot {
        return Some(false);
    }
    ldgm_in.chain(ldpc_in).find(|(e, m)| Some(*e) != skip && m.is_some()).and_then(|(_, m)| m)
}

/// Flooding message passing on the joint graph, one iteration being the
/// four half-steps LDGM check to variable, variable to LDPC check, LDPC
/// check to variable and variable to LDGM check. Stops at a fixpoint or
/// after `max_iters` iterations.
pub fn bp_decode(code: &CodeInstance, received: &ChannelRealization, sent: &[bool], max_iters: usize) -> TrialResult {
    let n = code.n();
    let outputs = code.g_inner.nrows();
    let g = Graph::new(code);
    let y: Vec<Option<bool>> = (0..outputs).map(|r| (!received.mask[r]).then(|| sent[r])).collect();
    let erased_outputs = received.erased_count();

    let mut x1 = vec![None; g.ldgm_var.len()];
    let mut x4 = vec![None; g.ldgm_var.len()];
    let mut x2 = vec![None; g.ldpc_var.len()];
    let mut x3 = vec![None; g.ldpc_var.len()];

    let decided = |x1: &[Option<bool>], x3: &[Option<bool>]| -> Vec<Option<bool>> {
        (0..n)
            .map(|v| {
                variable_value(
                    code.pilots[v],
                    g.var_ldgm[v].iter().map(|&e| (e, x1[e])),
                    g.var_ldpc[v].iter().map(|&e| (e, x3[e])),
                    None,
                )
            })
            .collect()
    };
    let unresolved = |d: &[Option<bool>]| d.iter().zip(&code.pilots).filter(|(x, &p)| !p && x.is_none()).count();

    let mut vars = decided(&x1, &x3);
    let mut trajectory = vec![unresolved(&vars)];
    let mut iterations = 0;
    if erased_outputs > 0 {
        while iterations < max_iters {
            let old = (x1.clone(), x3.clone());
            for r in 0..outputs {
                let (a, b) = (g.ldgm_ptr[r], g.ldgm_ptr[r + 1]);
                check_update(&x4[a..b], y[r], &mut x1[a..b]);
            }
            for (v, edges) in g.var_ldpc.iter().enumerate() {
                for &e in edges {
                    x2[e] = variable_value(
                        code.pilots[v],
                        g.var_ldgm[v].iter().map(|&f| (usize::MAX, x1[f])),
                        edges.iter().map(|&f| (f, x3[f])),
                        Some(e),
                    );
                }
            }
            for r in 0..code.h_outer.nrows() {
                let (a, b) = (g.ldpc_ptr[r], g.ldpc_ptr[r + 1]);
                check_update(&x2[a..b], Some(false), &mut x3[a..b]);
            }
            for (v, edges) in g.var_ldgm.iter().enumerate() {
                for &e in edges {
                    x4[e] = variable_value(
                        code.pilots[v],
                        edges.iter().map(|&f| (f, x1[f])),
                        g.var_ldpc[v].iter().map(|&f| (usize::MAX, x3[f])),
                        Some(e),
                    );
                }
            }
            iterations += 1;
            vars = decided(&x1, &x3);
            trajectory.push(unresolved(&vars));
            if old.0 == x1 && old.1 == x3 {
                break;
            }
        }
    }

    let estimate: Vec<Option<bool>> = (0..outputs)
        .map(|r| {
            y[r].or_else(|| {
                let (a, b) = (g.ldgm_ptr[r], g.ldgm_ptr[r + 1]);
                g.ldgm_var[a..b].iter().try_fold(false, |acc, &v| vars[v].map(|b| acc ^ b))
            })
        })
        .collect();
    let residual = estimate.iter().filter(|e| e.is_none()).count();
    TrialResult {
        decoder: DecoderKind::Bp,
        residual,
        failure: residual > 0,
        iterations,
        unresolved_variables: *trajectory.last().expect("trajectory starts non-empty"),
        trajectory,
        estimate,
    }
}

/// Exact erasure decoding: Gaussian elimination of `H v = 0` together with
/// the LDGM rows of the received bits, over the non-pilot outer variables.
/// An erased bit is recovered iff it takes the same value on every
/// solution.
pub fn ml_decode_bec(code: &CodeInstance, received: &ChannelRealization, sent: &[bool]) -> TrialResult {
    let n = code.n();
    let outputs = code.g_inner.nrows();
    let mut col_of = vec![usize::MAX; n];
    let mut unknowns = 0;
    for v in 0..n {
        if !code.pilots[v] {
            col_of[v] = unknowns;
            unknowns += 1;
        }
    }
    let estimate_known: Vec<Option<bool>> = (0..outputs).map(|r| (!received.mask[r]).then(|| sent[r])).collect();
    if received.erased_count() == 0 {
        return TrialResult {
            decoder: DecoderKind::Ml,
            residual: 0,
            failure: false,
            iterations: 0,
            unresolved_variables: 0,
            trajectory: Vec::new(),
            estimate: estimate_known,
        };
    }
    let rhs = unknowns;
    let cols = |row: &[usize]| row.iter().filter(|&&v| !code.pilots[v]).map(|&v| col_of[v]).collect::<Vec<_>>();
    let mut m = BitMatrix::new(unknowns + 1);
    for row in code.h_outer.rows() {
        m.push_row(cols(row));
    }
    for r in (0..outputs).filter(|&r| !received.mask[r]) {
        let mut c = cols(code.g_inner.row(r));
        if sent[r] {
            c.push(rhs);
        }
        m.push_row(c);
    }
    let pivots = m.rref(unknowns);
    let words = (unknowns + 1).div_ceil(64);
    let mut free_mask = vec![0u64; words];
    let mut pivot_row = vec![usize::MAX; unknowns];
    for (r, &p) in pivots.iter().enumerate() {
        pivot_row[p] = r;
    }
    for c in (0..unknowns).filter(|&c| pivot_row[c] == usize::MAX) {
        free_mask[c / 64] |= 1 << (c % 64);
    }
    let rhs_bit = |r: usize| m.get(r, rhs);
    let touches_free = |r: usize| m.row_words(r).iter().zip(&free_mask).any(|(a, b)| a & b != 0);

    let unresolved_variables = (0..unknowns).filter(|&c| pivot_row[c] == usize::MAX || touches_free(pivot_row[c])).count();

    let mut estimate = estimate_known;
    let mut acc = vec![0u64; words];
    for r in (0..outputs).filter(|&r| received.mask[r]) {
        acc.iter_mut().for_each(|w| *w = 0);
        for &v in code.g_inner.row(r) {
            if code.pilots[v] {
                continue;
            }
            let c = col_of[v];
            match pivot_row[c] {
                usize::MAX => acc[c / 64] ^= 1 << (c % 64),
                pr => acc.iter_mut().zip(m.row_words(pr)).for_each(|(a, b)| *a ^= b),
            }
        }
        if acc.iter().zip(&free_mask).all(|(a, b)| a & b == 0) {
            let value = code
                .g_inner
                .row(r)
                .iter()
                .filter(|&&v| !code.pilots[v])
                .map(|&v| pivot_row[col_of[v]])
                .filter(|&pr| pr != usize::MAX)
                .fold(false, |acc, pr| acc ^ rhs_bit(pr));
            estimate[r] = Some(value);
        }
    }
    let residual = estimate.iter().filter(|e| e.is_none()).count();
    TrialResult {
        decoder: DecoderKind::Ml,
        residual,
        failure: residual > 0,
        iterations: 0,
        unresolved_variables,
        trajectory: Vec::new(),
        estimate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::LdpcParams;
    use crate::simulator::sample::rng_from;

    fn setup(n: usize, j: usize, k: usize, seed: u64) -> (CodeInstance, Vec<bool>) {
        let code = CodeInstance::gallager(LdpcParams::new(n, j, k).unwrap(), seed);
        let v = code.encoder().random_codeword(&mut rng_from(seed ^ 1));
        let sent = code.transmit(&v);
        (code, sent)
    }

    #[test]
    fn noiseless_channel_needs_no_iterations() {
        let (code, sent) = setup(32, 3, 4, 1);
        let rx = ChannelRealization { mask: vec![false; 32], q: 0.0 };
        let r = bp_decode(&code, &rx, &sent, 100);
        assert_eq!((r.iterations, r.residual, r.failure), (0, 0, false));
        assert_eq!(r.wrong_bits(&sent), 0);
        assert!(!ml_decode_bec(&code, &rx, &sent).failure);
    }

    #[test]
    fn all_erased_fails() {
        let (code, sent) = setup(16, 2, 4, 2);
        let rx = ChannelRealization { mask: vec![true; 16], q: 1.0 };
        let r = bp_decode(&code, &rx, &sent, 100);
        assert!(r.failure && r.residual > 0);
        let m = ml_decode_bec(&code, &rx, &sent);
        assert!(m.failure && m.residual > 0);
    }

    #[test]
    fn ml_never_wrong_and_dominates_bp() {
        for seed in 0..30 {
            let (code, sent) = setup(48, 3, 6, seed);
            let mut rng = rng_from(seed + 100);
            let rx = ChannelRealization::sample(48, 0.2, &mut rng);
            let b = bp_decode(&code, &rx, &sent, 200);
            let m = ml_decode_bec(&code, &rx, &sent);
            assert_eq!(b.wrong_bits(&sent), 0);
            assert_eq!(m.wrong_bits(&sent), 0);
            assert!(m.residual <= b.residual);
            if !b.failure {
                assert!(!m.failure);
            }
        }
    }

    #[test]
    fn check_update_rules() {
        let mut out = [None; 3];
        check_update(&[Some(true), None, Some(false)], Some(false), &mut out);
        assert_eq!(out, [None, Some(true), None]);
        check_update(&[Some(true), Some(true), Some(false)], Some(true), &mut out);
        assert_eq!(out, [Some(false), Some(false), Some(true)]);
        check_update(&[Some(true)], None, &mut out[..1]);
        assert_eq!(out[0], None);
    }
}
