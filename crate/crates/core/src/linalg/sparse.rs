//! Compressed sparse row storage.

use super::{LinearOperator, Scalar};
use crate::error::{check_len, Error, Result};

/// Compressed-row sparse matrix.
///
/// Column indices are strictly increasing within every row, so a stored
/// entry is never duplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Validates raw CSR arrays.
    pub fn from_csr(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_offsets.len() != nrows + 1 || row_offsets[0] != 0 {
            return Err(Error::InvalidStructure(format!(
                "row offsets must have {} entries starting at 0",
                nrows + 1
            )));
        }
        if col_indices.len() != values.len() || *row_offsets.last().unwrap() != values.len() {
            return Err(Error::InvalidStructure(
                "column index, value and offset lengths disagree".into(),
            ));
        }
        for r in 0..nrows {
            let (lo, hi) = (row_offsets[r], row_offsets[r + 1]);
            if lo > hi {
                return Err(Error::InvalidStructure(format!("row {r} has negative length")));
            }
            let cols = &col_indices[lo..hi];
            if cols.iter().any(|&c| c >= ncols) {
                return Err(Error::InvalidStructure(format!("row {r} has a column out of range")));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidStructure(format!(
                    "row {r} columns are not strictly increasing"
                )));
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::IndexOutOfRange {
                    index: if r >= nrows { r } else { c },
                    len: if r >= nrows { nrows } else { ncols },
                });
            }
            counts[r + 1] += 1;
        }
        for r in 0..nrows {
            counts[r + 1] += counts[r];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![T::zero(); triplets.len()];
        for &(r, c, v) in triplets {
            cols[next[r]] = c;
            vals[next[r]] = v;
            next[r] += 1;
        }

        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_offsets.push(0);
        let mut order: Vec<usize> = Vec::new();
        for r in 0..nrows {
            let (lo, hi) = (counts[r], counts[r + 1]);
            order.clear();
            order.extend(lo..hi);
            order.sort_by_key(|&p| cols[p]);
            for &p in &order {
                if col_indices.len() > row_offsets[r] && *col_indices.last().unwrap() == cols[p] {
                    *values.last_mut().unwrap() += vals[p];
                } else {
                    col_indices.push(cols[p]);
                    values.push(vals[p]);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    /// Dense row-major input; exact zeros are not stored.
    pub fn from_dense(nrows: usize, ncols: usize, dense: &[T]) -> Result<Self> {
        check_len(nrows * ncols, dense.len())?;
        let mut triplets = Vec::new();
        for r in 0..nrows {
            for c in 0..ncols {
                let v = dense[r * ncols + c];
                if v != T::zero() {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(nrows, ncols, &triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[T]) {
        let (lo, hi) = (self.row_offsets[r], self.row_offsets[r + 1]);
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at `(r, c)`, zero when absent.
    pub fn get(&self, r: usize, c: usize) -> T {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(p) => vals[p],
            Err(_) => T::zero(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = vec![T::zero(); self.nrows];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = A x`
    pub fn spmv_into(&self, x: &[T], y: &mut [T]) -> Result<()> {
        check_len(self.ncols, x.len())?;
        check_len(self.nrows, y.len())?;
        for (r, yr) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_offsets[r], self.row_offsets[r + 1]);
            let mut acc = T::zero();
            for p in lo..hi {
                acc += self.values[p] * x[self.col_indices[p]];
            }
            *yr = acc;
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                col_indices[next[c]] = r;
                values[next[c]] = v;
                next[c] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_offsets: counts,
            col_indices,
            values,
        }
    }

    /// Sparse product `self * other` (row-by-row accumulation).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_len(self.ncols, other.nrows)?;
        let mut row_offsets = Vec::with_capacity(self.nrows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);

        let mut acc = vec![T::zero(); other.ncols];
        let mut marker = vec![usize::MAX; other.ncols];
        let mut pattern: Vec<usize> = Vec::new();
        for r in 0..self.nrows {
            pattern.clear();
            let (cols, vals) = self.row(r);
            for (&k, &a) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(k);
                for (&c, &b) in ocols.iter().zip(ovals) {
                    if marker[c] != r {
                        marker[c] = r;
                        acc[c] = a * b;
                        pattern.push(c);
                    } else {
                        acc[c] += a * b;
                    }
                }
            }
            pattern.sort_unstable();
            for &c in &pattern {
                col_indices.push(c);
                values.push(acc[c]);
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            nrows: self.nrows,
            ncols: other.ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let nrows = self.nrows * other.nrows;
        let ncols = self.ncols * other.ncols;
        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(self.nnz() * other.nnz());
        let mut values = Vec::with_capacity(self.nnz() * other.nnz());
        row_offsets.push(0);
        for r1 in 0..self.nrows {
            let (c1, v1) = self.row(r1);
            for r2 in 0..other.nrows {
                let (c2, v2) = other.row(r2);
                for (&a, &x) in c1.iter().zip(v1) {
                    for (&b, &y) in c2.iter().zip(v2) {
                        col_indices.push(a * other.ncols + b);
                        values.push(x * y);
                    }
                }
                row_offsets.push(col_indices.len());
            }
        }
        Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Principal submatrix on the sorted index set `indices`.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStructure(
                "submatrix indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= self.nrows.min(self.ncols) {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    len: self.nrows.min(self.ncols),
                });
            }
        }
        let mut local = vec![usize::MAX; self.ncols];
        for (l, &g) in indices.iter().enumerate() {
            local[g] = l;
        }
        let mut row_offsets = Vec::with_capacity(indices.len() + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for &g in indices {
            let (cols, vals) = self.row(g);
            for (&c, &v) in cols.iter().zip(vals) {
                if local[c] != usize::MAX {
                    col_indices.push(local[c]);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            nrows: indices.len(),
            ncols: indices.len(),
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SparseMatrix<U> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_offsets: self.row_offsets.clone(),
            col_indices: self.col_indices.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, alpha: T) -> Self {
        self.map(|v| v * alpha)
    }

    /// Largest `|A_ij - A_ji|` over the stored pattern (plain transpose, no conjugation).
    pub fn symmetry_defect(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                worst = worst.max((v - self.get(c, r)).abs());
            }
        }
        worst
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<T> {
        let mut dense = vec![T::zero(); self.nrows * self.ncols];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                dense[r * self.ncols + c] = v;
            }
        }
        dense
    }
}

impl<T: Scalar> LinearOperator<T> for SparseMatrix<T> {
    fn dim(&self) -> usize {
        self.nrows
    }

    fn apply(&self, x: &[T], y: &mut [T]) -> Result<()> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                found: self.ncols,
            });
        }
        self.spmv_into(x, y)
    }
}
