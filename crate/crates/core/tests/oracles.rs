//! Exact enumerators against exhaustive averaging over every graph in the
//! ensemble.

use ldpcgm::enumerator::{ldgm_iowe, ldpc_awd, ldpc_awd_table, rational};
use ldpcgm::{LdgmParams, LdpcParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn weight(x: u32) -> usize {
    x.count_ones() as usize
}

/// Average codeword count per weight over all `j`-tuples of layer
/// permutations.
fn brute_ldpc(n: usize, j: usize, k: usize) -> Vec<BigRational> {
    let perms = permutations(n);
    let mut counts = vec![0u64; n + 1];
    let mut graphs = 0u64;
    let mut idx = vec![0usize; j];
    loop {
        let rows: Vec<&[usize]> = idx.iter().flat_map(|&i| perms[i].chunks(k)).collect();
        for x in 0u32..(1 << n) {
            if rows.iter().all(|r| r.iter().filter(|&&c| x >> c & 1 == 1).count() % 2 == 0) {
                counts[weight(x)] += 1;
            }
        }
        graphs += 1;
        let mut d = 0;
        loop {
            if d == j {
                return counts.iter().map(|&c| rational(c as i64, graphs as i64)).collect();
            }
            idx[d] += 1;
            if idx[d] < perms.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Average input-output weight counts `[w][h]` over all socket matchings.
fn brute_ldgm(c: usize, d: usize, n: usize) -> Vec<Vec<BigRational>> {
    let inputs = d * n / c;
    let sockets: Vec<usize> = (0..inputs).flat_map(|v| std::iter::repeat_n(v, c)).collect();
    let perms = permutations(sockets.len());
    let mut counts = vec![vec![0i64; n + 1]; inputs + 1];
    for p in &perms {
        for x in 0u32..(1 << inputs) {
            let h = (0..n)
                .filter(|&o| (0..d).filter(|&s| x >> sockets[p[o * d + s]] & 1 == 1).count() % 2 == 1)
                .count();
            counts[weight(x)][h] += 1;
        }
    }
    counts.iter().map(|row| row.iter().map(|&c| rational(c, perms.len() as i64)).collect()).collect()
}

#[test]
fn ldpc_awd_equals_exhaustive_average() {
    for (n, j, k) in [(4, 2, 2), (4, 3, 2), (6, 2, 2), (4, 2, 4)] {
        let params = LdpcParams::new(n, j, k).unwrap();
        let brute = brute_ldpc(n, j, k);
        let table = ldpc_awd_table(params).unwrap();
        for (l, expect) in brute.iter().enumerate() {
            assert_eq!(&ldpc_awd(params, l).unwrap(), expect, "(n,j,k)=({n},{j},{k}) l={l}");
            assert_eq!(table.get(l), expect);
        }
    }
}

#[test]
fn ldgm_iowe_equals_exhaustive_average() {
    for (c, d, n) in [(2, 2, 2), (2, 2, 3), (3, 3, 2), (2, 4, 2)] {
        let params = LdgmParams::new(c, d, n).unwrap();
        let brute = brute_ldgm(c, d, n);
        for (w, row) in brute.iter().enumerate() {
            let mut sum = BigRational::zero();
            for (h, expect) in row.iter().enumerate() {
                let z = ldgm_iowe(params, w, h).unwrap();
                assert_eq!(&z, expect, "(c,d,n)=({c},{d},{n}) w={w} h={h}");
                sum += z;
            }
            let binom: u64 = (0..w as u64).fold(1, |acc, i| acc * (params.inputs() as u64 - i) / (i + 1));
            assert_eq!(sum, BigRational::from_integer(BigInt::from(binom)));
        }
    }
}
