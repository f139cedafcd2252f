use crate::error::{Error, Result};

/// Binary matrix stored as sorted column lists per row.
///
/// Repeated entries in a row cancel in pairs at construction (an even
/// multi-edge is no edge over GF(2)); the number of removed pairs is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseBinaryMatrix {
    rows: Vec<Vec<usize>>,
    ncols: usize,
    cancelled: usize,
}

impl SparseBinaryMatrix {
    pub fn from_rows(rows: Vec<Vec<usize>>, ncols: usize) -> Result<Self> {
        let mut cancelled = 0;
        let mut out = Vec::with_capacity(rows.len());
        for (r, mut row) in rows.into_iter().enumerate() {
            if let Some(&c) = row.iter().find(|&&c| c >= ncols) {
                return Err(Error::invalid(format!("row {r} has column {c} >= {ncols}")));
            }
            row.sort_unstable();
            let mut reduced: Vec<usize> = Vec::with_capacity(row.len());
            for c in row {
                if reduced.last() == Some(&c) {
                    reduced.pop();
                    cancelled += 1;
                } else {
                    reduced.push(c);
                }
            }
            out.push(reduced);
        }
        Ok(SparseBinaryMatrix { rows: out, ncols, cancelled })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Pairs of parallel entries removed at construction.
    pub fn cancelled(&self) -> usize {
        self.cancelled
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.ncols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    /// Row lists of the transpose.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    /// `M x` over GF(2).
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.ncols, "vector length must match column count");
        self.rows.iter().map(|row| row.iter().fold(false, |acc, &c| acc ^ x[c])).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<bool>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![false; self.ncols];
                for &c in row {
                    d[c] = true;
                }
                d
            })
            .collect()
    }
}
