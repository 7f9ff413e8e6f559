//! Two-level Schwarz preconditioners.
//!
//! With `Q = R_0ᵀ A_0⁻¹ R_0` and `A_i = R_i A R_iᵀ`:
//!
//! * AS2: `Q x + Σ R_iᵀ A_i⁻¹ R_i x`
//! * SAS2: `Q x + Σ R_iᵀ D_i A_i⁻¹ R_i x`
//! * SHS2: `Q x + Σ R_iᵀ D_i A_i⁻¹ R_i (x - A Q x)`
//!
//! All solves are exact sparse LU solves. Local solves run in parallel; their
//! contributions are summed in a fixed order so results do not depend on the
//! thread schedule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coarse::CoarseSpace;
use crate::decomposition::Decomposition;
use crate::error::{check_len, Error, Result};
use crate::linalg::{factorize, LinearOperator, Scalar, SparseFactorization, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreconditionerKind {
    As2,
    Sas2,
    Shs2,
}

impl PreconditionerKind {
    pub const ALL: [PreconditionerKind; 3] = [Self::As2, Self::Sas2, Self::Shs2];

    pub fn label(self) -> &'static str {
        match self {
            Self::As2 => "as2",
            Self::Sas2 => "sas2",
            Self::Shs2 => "shs2",
        }
    }
}

/// Where the partition-of-unity weights act in a scaled local term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightPlacement {
    /// `R_iᵀ D_i A_i⁻¹ R_i`: the local solution is weighted.
    #[default]
    Solution,
    /// `R_iᵀ A_i⁻¹ D_i R_i`: the local residual is weighted.
    Residual,
}

/// Factored local and coarse problems for one system matrix.
#[derive(Debug, Clone)]
pub struct TwoLevelSchwarz<T> {
    matrix: SparseMatrix<T>,
    decomposition: Decomposition,
    coarse: CoarseSpace<T>,
    local: Vec<SparseFactorization<T>>,
    placement: WeightPlacement,
}

impl<T: Scalar> TwoLevelSchwarz<T> {
    /// Factors every `R_i A R_iᵀ`.
    pub fn new(matrix: SparseMatrix<T>, decomposition: Decomposition, coarse: CoarseSpace<T>) -> Result<Self> {
        check_len(decomposition.num_unknowns(), matrix.nrows())?;
        check_len(matrix.nrows(), coarse.restriction().ncols())?;
        let local = (0..decomposition.len())
            .into_par_iter()
            .map(|i| factorize(&decomposition.local_matrix(i, &matrix)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            matrix,
            decomposition,
            coarse,
            local,
            placement: WeightPlacement::default(),
        })
    }

    pub fn with_weight_placement(mut self, placement: WeightPlacement) -> Self {
        self.placement = placement;
        self
    }

    pub fn weight_placement(&self) -> WeightPlacement {
        self.placement
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &SparseMatrix<T> {
        &self.matrix
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn coarse(&self) -> &CoarseSpace<T> {
        &self.coarse
    }

    pub fn local_factorizations(&self) -> &[SparseFactorization<T>] {
        &self.local
    }

    /// Same matrix and decomposition with another coarse space; local factors are reused.
    pub fn with_coarse(&self, coarse: CoarseSpace<T>) -> Result<Self> {
        check_len(self.dim(), coarse.restriction().ncols())?;
        Ok(Self {
            coarse,
            ..self.clone()
        })
    }

    fn local_solution(&self, i: usize, x: &[T], weighted: bool) -> Result<Vec<T>> {
        let mut xi = self.decomposition.restrict(i, x)?;
        let w = self.decomposition.weights(i);
        if weighted && self.placement == WeightPlacement::Residual {
            xi.iter_mut().zip(w).for_each(|(v, &d)| *v = v.scale(d));
        }
        let mut yi = self.local[i].solve(&xi)?;
        if weighted && self.placement == WeightPlacement::Solution {
            yi.iter_mut().zip(w).for_each(|(v, &d)| *v = v.scale(d));
        }
        Ok(yi)
    }

    /// One-level term `Σ R_iᵀ [D_i] A_i⁻¹ R_i x`, summed in `order`.
    pub fn local_sum_ordered(&self, x: &[T], weighted: bool, order: &[usize]) -> Result<Vec<T>> {
        check_len(self.dim(), x.len())?;
        let solutions = order
            .par_iter()
            .map(|&i| self.local_solution(i, x, weighted))
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![T::zero(); self.dim()];
        for (&i, yi) in order.iter().zip(&solutions) {
            self.decomposition.prolong_add(i, yi, &mut out)?;
        }
        Ok(out)
    }

    pub fn local_sum(&self, x: &[T], weighted: bool) -> Result<Vec<T>> {
        let order: Vec<usize> = (0..self.decomposition.len()).collect();
        self.local_sum_ordered(x, weighted, &order)
    }

    /// `R_0ᵀ A_0⁻¹ R_0 x`
    pub fn coarse_term(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.dim(), x.len())?;
        self.coarse.coarse_correct(x)
    }

    /// `x - A R_0ᵀ A_0⁻¹ R_0 x`
    pub fn deflate(&self, x: &[T]) -> Result<Vec<T>> {
        let q = self.coarse_term(x)?;
        let aq = self.matrix.spmv(&q)?;
        Ok(x.iter().zip(&aq).map(|(&a, &b)| a - b).collect())
    }

    pub fn apply_with_order(&self, kind: PreconditionerKind, x: &[T], order: &[usize]) -> Result<Vec<T>> {
        check_order(order, self.decomposition.len())?;
        let q = self.coarse_term(x)?;
        let local = match kind {
            PreconditionerKind::As2 => self.local_sum_ordered(x, false, order)?,
            PreconditionerKind::Sas2 => self.local_sum_ordered(x, true, order)?,
            PreconditionerKind::Shs2 => {
                let aq = self.matrix.spmv(&q)?;
                let deflated: Vec<T> = x.iter().zip(&aq).map(|(&a, &b)| a - b).collect();
                self.local_sum_ordered(&deflated, true, order)?
            }
        };
        Ok(q.into_iter().zip(local).map(|(a, b)| a + b).collect())
    }

    pub fn apply(&self, kind: PreconditionerKind, x: &[T]) -> Result<Vec<T>> {
        let order: Vec<usize> = (0..self.decomposition.len()).collect();
        self.apply_with_order(kind, x, &order)
    }

    pub fn apply_as2(&self, x: &[T]) -> Result<Vec<T>> {
        self.apply(PreconditionerKind::As2, x)
    }

    pub fn apply_sas2(&self, x: &[T]) -> Result<Vec<T>> {
        self.apply(PreconditionerKind::Sas2, x)
    }

    pub fn apply_shs2(&self, x: &[T]) -> Result<Vec<T>> {
        self.apply(PreconditionerKind::Shs2, x)
    }

    /// Borrowing operator view for a Krylov solver.
    pub fn preconditioner(&self, kind: PreconditionerKind) -> Preconditioner<'_, T> {
        Preconditioner { schwarz: self, kind }
    }
}

fn check_order(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in order {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidDecomposition(format!("subdomain {i} listed twice")));
        }
    }
    if order.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: order.len(),
        });
    }
    Ok(())
}

/// A [`TwoLevelSchwarz`] variant as a [`LinearOperator`].
#[derive(Debug, Clone, Copy)]
pub struct Preconditioner<'a, T> {
    schwarz: &'a TwoLevelSchwarz<T>,
    kind: PreconditionerKind,
}

impl<T: Scalar> Preconditioner<'_, T> {
    pub fn kind(&self) -> PreconditionerKind {
        self.kind
    }
}

impl<T: Scalar> LinearOperator<T> for Preconditioner<'_, T> {
    fn dim(&self) -> usize {
        self.schwarz.dim()
    }

    fn apply(&self, x: &[T], y: &mut [T]) -> Result<()> {
        check_len(self.dim(), y.len())?;
        let out = self.schwarz.apply(self.kind, x)?;
        y.copy_from_slice(&out);
        Ok(())
    }
}
