//! Scalar-generic sparse linear algebra: CSR storage, nested-dissection
//! ordering and a sparse direct LU used for every local and coarse solve.

mod lu;
mod ordering;
mod scalar;
mod sparse;
pub mod vector;

pub use lu::{factorize, SparseFactorization, DIAGONAL_PREFERENCE, SINGULAR_PIVOT_TOLERANCE};
pub use ordering::{nested_dissection, Graph};
pub use scalar::Scalar;
pub use sparse::SparseMatrix;

use crate::error::{check_len, Result};

/// Square linear map applied to vectors, `y = Op(x)`.
pub trait LinearOperator<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[T], y: &mut [T]) -> Result<()>;

    fn apply_vec(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = vec![T::zero(); self.dim()];
        self.apply(x, &mut y)?;
        Ok(y)
    }
}

impl<T: Scalar, O: LinearOperator<T> + ?Sized> LinearOperator<T> for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[T], y: &mut [T]) -> Result<()> {
        (**self).apply(x, y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl<T: Scalar> LinearOperator<T> for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[T], y: &mut [T]) -> Result<()> {
        check_len(self.0, x.len())?;
        check_len(self.0, y.len())?;
        y.copy_from_slice(x);
        Ok(())
    }
}
