#![allow(dead_code)]

use helmholtz_schwarz::linalg::SparseMatrix;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type C = Complex64;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn dense_real(a: &SparseMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.nrows(), a.ncols(), &a.to_dense())
}

pub fn dense_complex(a: &SparseMatrix<C>) -> DMatrix<C> {
    DMatrix::from_row_slice(a.nrows(), a.ncols(), &a.to_dense())
}

pub fn random_sparse_real(rng: &mut StdRng, nrows: usize, ncols: usize, density: f64) -> SparseMatrix<f64> {
    let mut t = Vec::new();
    for r in 0..nrows {
        for c in 0..ncols {
            if rng.gen::<f64>() < density {
                t.push((r, c, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    SparseMatrix::from_triplets(nrows, ncols, &t).unwrap()
}

pub fn random_sparse_complex(rng: &mut StdRng, nrows: usize, ncols: usize, density: f64) -> SparseMatrix<C> {
    let mut t = Vec::new();
    for r in 0..nrows {
        for c in 0..ncols {
            if rng.gen::<f64>() < density {
                t.push((r, c, C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
            }
        }
    }
    SparseMatrix::from_triplets(nrows, ncols, &t).unwrap()
}

pub fn random_real(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_complex(rng: &mut StdRng, n: usize) -> Vec<C> {
    (0..n)
        .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn rel_err_real(x: &[f64], y: &[f64]) -> f64 {
    let d = DVector::from_column_slice(x) - DVector::from_column_slice(y);
    d.norm() / DVector::from_column_slice(y).norm().max(f64::MIN_POSITIVE)
}

pub fn rel_err_complex(x: &[C], y: &[C]) -> f64 {
    let d = DVector::from_column_slice(x) - DVector::from_column_slice(y);
    d.norm() / DVector::from_column_slice(y).norm().max(f64::MIN_POSITIVE)
}

/// Relative Frobenius distance between two dense matrices.
pub fn mat_err_complex(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn mat_err_real(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

/// Selection matrix with `R[l, idx[l]] = 1`.
pub fn selection(idx: &[usize], n: usize) -> DMatrix<f64> {
    let mut r = DMatrix::zeros(idx.len(), n);
    for (l, &g) in idx.iter().enumerate() {
        r[(l, g)] = 1.0;
    }
    r
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C> {
    m.map(|v| C::new(v, 0.0))
}

use helmholtz_schwarz::decomposition::Decomposition;
use helmholtz_schwarz::preconditioner::{PreconditionerKind, TwoLevelSchwarz, WeightPlacement};

/// Explicit matrix of a two-level preconditioner from dense inverses.
pub fn dense_schwarz(
    a: &DMatrix<C>,
    dd: &Decomposition,
    r0: &DMatrix<C>,
    kind: PreconditionerKind,
    placement: WeightPlacement,
) -> DMatrix<C> {
    let n = a.nrows();
    let a0 = r0 * a * r0.transpose();
    let q = r0.transpose() * a0.try_inverse().expect("coarse matrix invertible") * r0;
    let mut local = DMatrix::<C>::zeros(n, n);
    for i in 0..dd.len() {
        let r = to_complex(&selection(dd.indices(i), n));
        let ai = (&r * a * r.transpose()).try_inverse().expect("local matrix invertible");
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            dd.indices(i).len(),
            dd.weights(i).iter().map(|&w| C::new(w, 0.0)),
        ));
        let term = match (kind, placement) {
            (PreconditionerKind::As2, _) => ai,
            (_, WeightPlacement::Solution) => d * ai,
            (_, WeightPlacement::Residual) => ai * d,
        };
        local += r.transpose() * term * &r;
    }
    match kind {
        PreconditionerKind::Shs2 => &q + &local * (DMatrix::<C>::identity(n, n) - a * &q),
        _ => q + local,
    }
}

/// Matrix of `x ↦ M⁻¹ x` from applications to unit vectors.
pub fn applied_complex(s: &TwoLevelSchwarz<C>, kind: PreconditionerKind) -> DMatrix<C> {
    let n = s.dim();
    let mut m = DMatrix::<C>::zeros(n, n);
    for j in 0..n {
        let mut e = vec![C::new(0.0, 0.0); n];
        e[j] = C::new(1.0, 0.0);
        let col = s.apply(kind, &e).unwrap();
        m.set_column(j, &DVector::from_column_slice(&col));
    }
    m
}

pub fn applied_real(s: &TwoLevelSchwarz<f64>, kind: PreconditionerKind) -> DMatrix<f64> {
    let n = s.dim();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = s.apply(kind, &e).unwrap();
        m.set_column(j, &DVector::from_column_slice(&col));
    }
    m
}
