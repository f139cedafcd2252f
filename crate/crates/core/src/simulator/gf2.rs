//! Dense GF(2) elimination on bit-packed rows.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    words: usize,
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(ncols: usize) -> Self {
        BitMatrix { words: ncols.div_ceil(64), ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, cols: impl IntoIterator<Item = usize>) {
        let mut row = vec![0u64; self.words];
        for c in cols {
            debug_assert!(c < self.ncols);
            row[c / 64] ^= 1 << (c % 64);
        }
        self.rows.push(row);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.rows[r]
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// of the first `rank` rows. Columns at or beyond `limit` are carried
    /// along but never chosen as pivots (an augmented right-hand side).
    pub fn rref(&mut self, limit: usize) -> Vec<usize> {
        let limit = limit.min(self.ncols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows.len() {
                break;
            }
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (r..self.rows.len()).find(|&i| self.rows[i][w] & bit != 0) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot = std::mem::take(&mut self.rows[r]);
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && row[w] & bit != 0 {
                    for (a, b) in row[w..].iter_mut().zip(&pivot[w..]) {
                        *a ^= b;
                    }
                }
            }
            self.rows[r] = pivot;
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Basis of the null space of a matrix already in RREF with the given
/// pivots, over its first `limit` columns. Returns `(free columns, basis)`.
pub fn null_space(m: &BitMatrix, pivots: &[usize], limit: usize) -> (Vec<usize>, Vec<Vec<bool>>) {
    let mut is_pivot = vec![false; limit];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..limit).filter(|&c| !is_pivot[c]).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut z = vec![false; limit];
            z[f] = true;
            for (r, &p) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    z[p] = true;
                }
            }
            z
        })
        .collect();
    (free, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let mut m = BitMatrix::new(4);
        m.push_row([0, 1]);
        m.push_row([1, 2]);
        m.push_row([0, 2]);
        let pivots = m.rref(4);
        assert_eq!(pivots, vec![0, 1]);
        let (free, basis) = null_space(&m, &pivots, 4);
        assert_eq!(free, vec![2, 3]);
        assert_eq!(basis[0], vec![true, true, true, false]);
        assert_eq!(basis[1], vec![false, false, false, true]);
    }

    #[test]
    fn wide_rows_cross_word_boundary() {
        let mut m = BitMatrix::new(130);
        m.push_row([0, 129]);
        m.push_row([129, 64]);
        let pivots = m.rref(130);
        assert_eq!(pivots, vec![0, 64]);
        assert!(m.get(0, 0) && m.get(0, 129) && !m.get(0, 64));
        assert!(m.get(1, 64) && m.get(1, 129) && !m.get(1, 0));
    }

    #[test]
    fn augmented_column_is_not_a_pivot() {
        let mut m = BitMatrix::new(3);
        m.push_row([2]);
        assert!(m.rref(2).is_empty());
    }
}
