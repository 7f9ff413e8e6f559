//! Left-looking sparse LU with threshold partial pivoting.
//!
//! The matrix is first permuted symmetrically by nested dissection, then
//! factored column by column (Gilbert–Peierls): each column is a sparse
//! triangular solve against the finished part of `L`, with the reach of the
//! right-hand side computed by depth-first search. Row pivots prefer the
//! diagonal entry while it stays within [`DIAGONAL_PREFERENCE`] of the column
//! maximum.
//!
//! The symbolic phase records an upper bound on `nnz(L) + nnz(U)`: under any
//! row pivoting, the factors fit in the Cholesky pattern of `BᵀB` where `B` is
//! the permuted matrix.

use super::ordering::{nested_dissection, Graph};
use super::{LinearOperator, Scalar, SparseMatrix};
use crate::error::{check_len, Error, Result};

/// Relative pivot threshold below which the factorization reports singularity.
pub const SINGULAR_PIVOT_TOLERANCE: f64 = 1e-14;

/// Diagonal pivot is kept when `|a_kk| >= DIAGONAL_PREFERENCE * max_i |a_ik|`.
pub const DIAGONAL_PREFERENCE: f64 = 0.1;

const NONE: usize = usize::MAX;

/// `P Qᵀ A Q = L U` for a fill-reducing `Q` and a pivoting row permutation `P`.
#[derive(Debug, Clone)]
pub struct SparseFactorization<T> {
    n: usize,
    /// `col_perm[new] = old`
    col_perm: Vec<usize>,
    /// Pivot position of each row of the symmetrically permuted matrix.
    row_pinv: Vec<usize>,
    /// Row `k` holds column `k` of the unit lower factor, diagonal first.
    lower_by_col: SparseMatrix<T>,
    /// Row `k` holds column `k` of the upper factor, diagonal last.
    upper_by_col: SparseMatrix<T>,
    fill_bound: usize,
}

impl<T: Scalar> SparseFactorization<T> {
    pub fn new(a: &SparseMatrix<T>) -> Result<Self> {
        factorize(a)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries of `L` (including its unit diagonal) plus `U`.
    pub fn factor_nnz(&self) -> usize {
        self.lower_by_col.nnz() + self.upper_by_col.nnz()
    }

    /// Upper bound on [`Self::factor_nnz`] computed before numeric factorization.
    pub fn fill_bound(&self) -> usize {
        self.fill_bound
    }

    pub fn column_permutation(&self) -> &[usize] {
        &self.col_perm
    }

    /// Row `i` of `Qᵀ A Q` becomes row `row_pivots()[i]` of `L U`.
    pub fn row_pivots(&self) -> &[usize] {
        &self.row_pinv
    }

    /// Unit lower factor in row-compressed form.
    pub fn lower(&self) -> SparseMatrix<T> {
        self.lower_by_col.transpose()
    }

    /// Upper factor in row-compressed form.
    pub fn upper(&self) -> SparseMatrix<T> {
        self.upper_by_col.transpose()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let mut x = vec![T::zero(); self.n];
        self.solve_into(b, &mut x)?;
        Ok(x)
    }

    /// `x = A⁻¹ b`
    pub fn solve_into(&self, b: &[T], x: &mut [T]) -> Result<()> {
        check_len(self.n, b.len())?;
        check_len(self.n, x.len())?;
        let mut z = vec![T::zero(); self.n];
        for (i, &old) in self.col_perm.iter().enumerate() {
            z[self.row_pinv[i]] = b[old];
        }
        for j in 0..self.n {
            let zj = z[j];
            if zj == T::zero() {
                continue;
            }
            let (rows, vals) = self.lower_by_col.row(j);
            for (&r, &v) in rows.iter().zip(vals).skip(1) {
                z[r] -= v * zj;
            }
        }
        for j in (0..self.n).rev() {
            let (rows, vals) = self.upper_by_col.row(j);
            let last = rows.len() - 1;
            z[j] /= vals[last];
            let zj = z[j];
            if zj == T::zero() {
                continue;
            }
            for (&r, &v) in rows[..last].iter().zip(&vals[..last]) {
                z[r] -= v * zj;
            }
        }
        for (i, &old) in self.col_perm.iter().enumerate() {
            x[old] = z[i];
        }
        Ok(())
    }
}

/// The factorization applied as an operator is the inverse of the factored matrix.
impl<T: Scalar> LinearOperator<T> for SparseFactorization<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) -> Result<()> {
        self.solve_into(x, y)
    }
}

/// Column-compressed copy of `Qᵀ A Q`.
struct Csc<T> {
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Scalar> Csc<T> {
    fn permuted(a: &SparseMatrix<T>, perm: &[usize], inv: &[usize]) -> Self {
        let at = a.transpose();
        let mut col_ptr = Vec::with_capacity(perm.len() + 1);
        let mut rows = Vec::with_capacity(a.nnz());
        let mut vals = Vec::with_capacity(a.nnz());
        col_ptr.push(0);
        for &old in perm {
            let (r, v) = at.row(old);
            rows.extend(r.iter().map(|&i| inv[i]));
            vals.extend_from_slice(v);
            col_ptr.push(rows.len());
        }
        Self { col_ptr, rows, vals }
    }

    fn col(&self, j: usize) -> (&[usize], &[T]) {
        let (lo, hi) = (self.col_ptr[j], self.col_ptr[j + 1]);
        (&self.rows[lo..hi], &self.vals[lo..hi])
    }
}

pub fn factorize<T: Scalar>(a: &SparseMatrix<T>) -> Result<SparseFactorization<T>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    let threshold = SINGULAR_PIVOT_TOLERANCE * a.max_abs();

    let graph = Graph::from_pattern(n, a.row_offsets(), a.col_indices());
    let col_perm = nested_dissection(&graph);
    let mut inv = vec![0; n];
    for (new, &old) in col_perm.iter().enumerate() {
        inv[old] = new;
    }
    let b = Csc::permuted(a, &col_perm, &inv);
    let fill_bound = george_ng_bound(&b, n);

    // L and U column storage; L rows are in unpivoted numbering until the end
    let mut lp = vec![0usize];
    let mut li: Vec<usize> = Vec::with_capacity(2 * a.nnz());
    let mut lx: Vec<T> = Vec::with_capacity(2 * a.nnz());
    let mut up = vec![0usize];
    let mut ui: Vec<usize> = Vec::with_capacity(2 * a.nnz());
    let mut ux: Vec<T> = Vec::with_capacity(2 * a.nnz());

    let mut pinv = vec![NONE; n];
    let mut x = vec![T::zero(); n];
    let mut xi = vec![0usize; n];
    let mut stack = vec![0usize; n];
    let mut pstack = vec![0usize; n];
    let mut mark = vec![NONE; n];

    for k in 0..n {
        let (brows, bvals) = b.col(k);

        // reach of B(:,k) in the graph of L, topologically ordered in xi[top..]
        let mut top = n;
        for &start in brows {
            if mark[start] == k {
                continue;
            }
            let mut head: isize = 0;
            stack[0] = start;
            while head >= 0 {
                let v = stack[head as usize];
                let col = pinv[v];
                if mark[v] != k {
                    mark[v] = k;
                    pstack[head as usize] = if col == NONE { 0 } else { lp[col] };
                }
                let end = if col == NONE { 0 } else { lp[col + 1] };
                let mut done = true;
                let mut p = pstack[head as usize];
                while p < end {
                    let i = li[p];
                    p += 1;
                    if mark[i] != k {
                        pstack[head as usize] = p;
                        head += 1;
                        stack[head as usize] = i;
                        done = false;
                        break;
                    }
                }
                if done {
                    head -= 1;
                    top -= 1;
                    xi[top] = v;
                }
            }
        }

        // sparse triangular solve L x = B(:,k)
        for &i in &xi[top..] {
            x[i] = T::zero();
        }
        for (&i, &v) in brows.iter().zip(bvals) {
            x[i] = v;
        }
        for idx in top..n {
            let j = xi[idx];
            let col = pinv[j];
            if col == NONE {
                continue;
            }
            let xj = x[j];
            for p in lp[col] + 1..lp[col + 1] {
                x[li[p]] -= lx[p] * xj;
            }
        }

        // pivot search among rows not yet pivoted
        let mut ipiv = NONE;
        let mut best = -1.0f64;
        for &i in &xi[top..] {
            if pinv[i] == NONE {
                let m = x[i].abs();
                if m > best {
                    best = m;
                    ipiv = i;
                }
            } else {
                ui.push(pinv[i]);
                ux.push(x[i]);
            }
        }
        if ipiv == NONE || best <= threshold {
            return Err(Error::Singular {
                column: k,
                magnitude: best.max(0.0),
                threshold,
            });
        }
        if pinv[k] == NONE && mark[k] == k && x[k].abs() >= DIAGONAL_PREFERENCE * best {
            ipiv = k;
        }

        let pivot = x[ipiv];
        ui.push(k);
        ux.push(pivot);
        up.push(ui.len());
        pinv[ipiv] = k;
        li.push(ipiv);
        lx.push(T::one());
        for &i in &xi[top..] {
            if pinv[i] == NONE {
                li.push(i);
                lx.push(x[i] / pivot);
            }
            x[i] = T::zero();
        }
        lp.push(li.len());
    }

    for r in li.iter_mut() {
        *r = pinv[*r];
    }
    let lower_by_col = sorted_columns(n, lp, li, lx)?;
    let upper_by_col = sorted_columns(n, up, ui, ux)?;
    let fact = SparseFactorization {
        n,
        col_perm,
        row_pinv: pinv,
        lower_by_col,
        upper_by_col,
        fill_bound,
    };
    debug_assert!(fact.factor_nnz() <= fact.fill_bound);
    Ok(fact)
}

fn sorted_columns<T: Scalar>(
    n: usize,
    ptr: Vec<usize>,
    mut idx: Vec<usize>,
    mut vals: Vec<T>,
) -> Result<SparseMatrix<T>> {
    let mut order: Vec<usize> = Vec::new();
    let mut tmp_i: Vec<usize> = Vec::new();
    let mut tmp_v: Vec<T> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (ptr[j], ptr[j + 1]);
        order.clear();
        order.extend(lo..hi);
        order.sort_unstable_by_key(|&p| idx[p]);
        tmp_i.clear();
        tmp_v.clear();
        tmp_i.extend(order.iter().map(|&p| idx[p]));
        tmp_v.extend(order.iter().map(|&p| vals[p]));
        idx[lo..hi].copy_from_slice(&tmp_i);
        vals[lo..hi].copy_from_slice(&tmp_v);
    }
    SparseMatrix::from_csr(n, n, ptr, idx, vals)
}

/// `2 · nnz(chol(BᵀB))`, counting the diagonal once per factor.
fn george_ng_bound<T: Scalar>(b: &Csc<T>, n: usize) -> usize {
    // row lists of B
    let mut row_ptr = vec![0usize; n + 1];
    for &r in &b.rows {
        row_ptr[r + 1] += 1;
    }
    for r in 0..n {
        row_ptr[r + 1] += row_ptr[r];
    }
    let mut next = row_ptr.clone();
    let mut row_cols = vec![0usize; b.rows.len()];
    for j in 0..n {
        for &r in b.col(j).0 {
            row_cols[next[r]] = j;
            next[r] += 1;
        }
    }

    let mut seen = vec![NONE; n];
    let mut pattern: Vec<usize> = Vec::new();
    let lower_pattern = |i: usize, seen: &mut Vec<usize>, pattern: &mut Vec<usize>| {
        pattern.clear();
        for &r in b.col(i).0 {
            for &c in &row_cols[row_ptr[r]..row_ptr[r + 1]] {
                if c < i && seen[c] != i {
                    seen[c] = i;
                    pattern.push(c);
                }
            }
        }
    };

    // elimination tree with path compression
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for i in 0..n {
        lower_pattern(i, &mut seen, &mut pattern);
        for &start in pattern.iter() {
            let mut k = start;
            while ancestor[k] != NONE && ancestor[k] != i {
                let up = ancestor[k];
                ancestor[k] = i;
                k = up;
            }
            if ancestor[k] == NONE {
                ancestor[k] = i;
                parent[k] = i;
            }
        }
    }

    // row counts by row-subtree traversal
    seen.iter_mut().for_each(|s| *s = NONE);
    let mut visit = vec![NONE; n];
    let mut count = n;
    for i in 0..n {
        lower_pattern(i, &mut seen, &mut pattern);
        visit[i] = i;
        for &start in pattern.iter() {
            let mut k = start;
            while visit[k] != i {
                visit[k] = i;
                count += 1;
                k = parent[k];
            }
        }
    }
    2 * count
}
