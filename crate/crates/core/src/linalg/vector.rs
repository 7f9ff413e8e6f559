//! Dense vector kernels on slices.

use super::Scalar;

/// Hermitian inner product `xᴴ y`.
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a.conj() * b).sum()
}

pub fn norm2<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|v| v.abs_sqr()).sum::<f64>().sqrt()
}

pub fn norm_inf<T: Scalar>(x: &[T]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `y += alpha * x`
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale<T: Scalar>(alpha: T, x: &mut [T]) {
    for v in x {
        *v *= alpha;
    }
}

/// `‖x - y‖₂`
pub fn distance<T: Scalar>(x: &[T], y: &[T]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| (a - b).abs_sqr())
        .sum::<f64>()
        .sqrt()
}
