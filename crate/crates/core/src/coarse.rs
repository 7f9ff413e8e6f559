//! Coarse restriction operators and the Galerkin coarse problem.
//!
//! Coarse nodes sit on every `r`-th fine node, `r = H/h`. Both coarse spaces
//! are tensor products of a 1D restriction along each axis and follow the
//! fine-grid unknown convention: Dirichlet coarse grids drop boundary nodes,
//! Sommerfeld coarse grids keep them.
//!
//! * [`CoarseKind::Linear`]: rows are bilinear hat functions, 1D weights
//!   `1 - |d|/r` for a fine node at distance `d < r` from the coarse node.
//! * [`CoarseKind::Bezier`]: the 1D operator for `H = 2h` is the stencil
//!   `(1, 4, 6, 4, 1) / 8` centred on fine node `2i`; for `H = 2^s h` it is the
//!   product of `s` such operators through the intermediate grids.

use serde::{Deserialize, Serialize};

use crate::discretization::{BoundaryCondition, Grid};
use crate::error::{check_len, Error, Result};
use crate::linalg::{factorize, Scalar, SparseFactorization, SparseMatrix};

/// One-level Bézier restriction weights for offsets `-2..=2`.
pub const BEZIER_STENCIL: [f64; 5] = [0.125, 0.5, 0.75, 0.5, 0.125];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoarseKind {
    /// Bilinear interpolation (first-order coarse space).
    #[serde(rename = "focs", alias = "linear")]
    Linear,
    /// Composed second-order rational Bézier stencils (higher-order coarse space).
    #[serde(rename = "hocs", alias = "bezier")]
    Bezier,
}

impl CoarseKind {
    pub fn label(self) -> &'static str {
        match self {
            CoarseKind::Linear => "focs",
            CoarseKind::Bezier => "hocs",
        }
    }
}

/// How a Bézier stencil that reaches past a Sommerfeld boundary is closed.
///
/// Dirichlet grids always truncate since the boundary carries no unknowns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StencilBoundary {
    /// Out-of-range weights are dropped.
    #[default]
    Truncate,
    /// Out-of-range weights are added to the boundary node.
    Fold,
}

fn check_ratio(grid: &Grid, ratio: usize) -> Result<usize> {
    if ratio == 0 || grid.cells() % ratio != 0 {
        return Err(Error::InvalidCoarseSpace(format!(
            "coarsening ratio {ratio} does not divide {} cells",
            grid.cells()
        )));
    }
    let coarse_nodes = grid.cells() / ratio + 1;
    if grid.boundary() == BoundaryCondition::Dirichlet && coarse_nodes < 3 {
        return Err(Error::InvalidCoarseSpace(format!(
            "ratio {ratio} leaves no interior coarse node on {} cells",
            grid.cells()
        )));
    }
    Ok(coarse_nodes)
}

/// Keeps interior rows and columns when the boundary carries no unknowns.
fn restrict_to_unknowns(bc: BoundaryCondition, full: Vec<Vec<(usize, f64)>>, fine_nodes: usize) -> SparseMatrix<f64> {
    let (skip, ncols) = match bc {
        BoundaryCondition::Dirichlet => (1, fine_nodes - 2),
        BoundaryCondition::Sommerfeld => (0, fine_nodes),
    };
    let nrows = full.len() - 2 * skip;
    let mut triplets = Vec::new();
    for (r, row) in full.iter().enumerate().skip(skip).take(nrows) {
        for &(c, w) in row {
            if c >= skip && c < skip + ncols {
                triplets.push((r - skip, c - skip, w));
            }
        }
    }
    SparseMatrix::from_triplets(nrows, ncols, &triplets).expect("indices in range")
}

/// 1D hat-function restriction onto every `ratio`-th node.
pub fn linear_restriction_1d(grid: &Grid, ratio: usize) -> Result<SparseMatrix<f64>> {
    let coarse_nodes = check_ratio(grid, ratio)?;
    let n = grid.n();
    let full: Vec<Vec<(usize, f64)>> = (0..coarse_nodes)
        .map(|c| {
            let center = c * ratio;
            let lo = center.saturating_sub(ratio - 1);
            let hi = (center + ratio - 1).min(n - 1);
            (lo..=hi)
                .map(|q| (q, 1.0 - center.abs_diff(q) as f64 / ratio as f64))
                .collect()
        })
        .collect();
    Ok(restrict_to_unknowns(grid.boundary(), full, n))
}

/// One Bézier level from `fine_nodes` nodes onto `(fine_nodes - 1)/2 + 1`.
pub fn bezier_level_1d(fine_nodes: usize, bc: BoundaryCondition, closure: StencilBoundary) -> SparseMatrix<f64> {
    debug_assert!(fine_nodes >= 3 && (fine_nodes - 1) % 2 == 0);
    let coarse_nodes = (fine_nodes - 1) / 2 + 1;
    let last = fine_nodes as isize - 1;
    let fold = bc == BoundaryCondition::Sommerfeld && closure == StencilBoundary::Fold;
    let full: Vec<Vec<(usize, f64)>> = (0..coarse_nodes)
        .map(|c| {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(5);
            for (t, &w) in BEZIER_STENCIL.iter().enumerate() {
                let q = 2 * c as isize + t as isize - 2;
                let q = if (0..=last).contains(&q) {
                    q
                } else if fold {
                    q.clamp(0, last)
                } else {
                    continue;
                };
                match row.iter_mut().find(|(col, _)| *col == q as usize) {
                    Some(entry) => entry.1 += w,
                    None => row.push((q as usize, w)),
                }
            }
            row
        })
        .collect();
    restrict_to_unknowns(bc, full, fine_nodes)
}

/// 1D Bézier restriction for a power-of-two ratio, composed level by level.
pub fn bezier_restriction_1d(grid: &Grid, ratio: usize, closure: StencilBoundary) -> Result<SparseMatrix<f64>> {
    if ratio < 2 || !ratio.is_power_of_two() {
        return Err(Error::InvalidCoarseSpace(format!(
            "Bézier coarse space needs a power-of-two ratio of at least 2, got {ratio}"
        )));
    }
    check_ratio(grid, ratio)?;
    let mut nodes = grid.n();
    let mut op: Option<SparseMatrix<f64>> = None;
    for _ in 0..ratio.trailing_zeros() {
        let level = bezier_level_1d(nodes, grid.boundary(), closure);
        op = Some(match op {
            None => level,
            Some(prev) => level.matmul(&prev)?,
        });
        nodes = (nodes - 1) / 2 + 1;
    }
    Ok(op.expect("at least one level"))
}

pub fn restriction_1d(kind: CoarseKind, grid: &Grid, ratio: usize, closure: StencilBoundary) -> Result<SparseMatrix<f64>> {
    match kind {
        CoarseKind::Linear => linear_restriction_1d(grid, ratio),
        CoarseKind::Bezier => bezier_restriction_1d(grid, ratio, closure),
    }
}

/// 2D restriction `R_0 = R_1D ⊗ R_1D` (unknowns are numbered `x` fastest).
pub fn restriction<T: Scalar>(kind: CoarseKind, grid: &Grid, ratio: usize, closure: StencilBoundary) -> Result<SparseMatrix<T>> {
    let r1 = restriction_1d(kind, grid, ratio, closure)?;
    Ok(r1.kron(&r1).map(T::from_real))
}

/// `R_0 A R_0ᵀ`
pub fn galerkin<T: Scalar>(r0: &SparseMatrix<T>, a: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
    check_len(a.nrows(), r0.ncols())?;
    r0.matmul(&a.matmul(&r0.transpose())?)
}

/// Coarse level of a two-level method: `R_0`, `R_0ᵀ` and the factored `A_0`.
#[derive(Debug, Clone)]
pub struct CoarseSpace<T> {
    kind: CoarseKind,
    ratio: usize,
    coarse_nodes_per_dim: usize,
    restriction: SparseMatrix<T>,
    prolongation: SparseMatrix<T>,
    galerkin_nnz: usize,
    factorization: SparseFactorization<T>,
}

impl<T: Scalar> CoarseSpace<T> {
    /// Coarse space of the given kind with truncated stencils.
    pub fn build(kind: CoarseKind, grid: &Grid, ratio: usize, a: &SparseMatrix<T>) -> Result<Self> {
        Self::build_with(kind, grid, ratio, StencilBoundary::Truncate, a)
    }

    pub fn build_with(
        kind: CoarseKind,
        grid: &Grid,
        ratio: usize,
        closure: StencilBoundary,
        a: &SparseMatrix<T>,
    ) -> Result<Self> {
        check_len(grid.num_unknowns(), a.nrows())?;
        let r0 = restriction(kind, grid, ratio, closure)?;
        let mut cs = Self::from_restriction(kind, r0, a)?;
        cs.ratio = ratio;
        cs.coarse_nodes_per_dim = grid.cells() / ratio + 1;
        Ok(cs)
    }

    /// Wraps an explicit restriction; `ratio` and coarse node count are left at zero.
    pub fn from_restriction(kind: CoarseKind, r0: SparseMatrix<T>, a: &SparseMatrix<T>) -> Result<Self> {
        let a0 = galerkin(&r0, a)?;
        let galerkin_nnz = a0.nnz();
        let factorization = factorize(&a0)?;
        Ok(Self {
            kind,
            ratio: 0,
            coarse_nodes_per_dim: 0,
            prolongation: r0.transpose(),
            restriction: r0,
            galerkin_nnz,
            factorization,
        })
    }

    pub fn kind(&self) -> CoarseKind {
        self.kind
    }

    pub fn ratio(&self) -> usize {
        self.ratio
    }

    /// Coarse nodes per axis including boundary nodes, `(n-1)/r + 1`.
    pub fn coarse_nodes_per_dim(&self) -> usize {
        self.coarse_nodes_per_dim
    }

    /// All coarse nodes `|G_H|`, boundary included.
    pub fn coarse_node_count(&self) -> usize {
        self.coarse_nodes_per_dim.pow(2)
    }

    /// Coarse unknowns (rows of `R_0`).
    pub fn dim(&self) -> usize {
        self.restriction.nrows()
    }

    pub fn restriction(&self) -> &SparseMatrix<T> {
        &self.restriction
    }

    pub fn prolongation(&self) -> &SparseMatrix<T> {
        &self.prolongation
    }

    pub fn factorization(&self) -> &SparseFactorization<T> {
        &self.factorization
    }

    /// Stored entries of `A_0`.
    pub fn galerkin_nnz(&self) -> usize {
        self.galerkin_nnz
    }

    /// `R_0ᵀ A_0⁻¹ R_0 r`
    pub fn coarse_correct(&self, r: &[T]) -> Result<Vec<T>> {
        let rc = self.restriction.spmv(r)?;
        let yc = self.factorization.solve(&rc)?;
        self.prolongation.spmv(&yc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, bc: BoundaryCondition) -> Grid {
        Grid::new(n, bc).unwrap()
    }

    #[test]
    fn linear_ratio_two_weights() {
        let r = linear_restriction_1d(&grid(9, BoundaryCondition::Sommerfeld), 2).unwrap();
        assert_eq!(r.nrows(), 5);
        let (cols, vals) = r.row(2);
        assert_eq!(cols, &[3, 4, 5]);
        assert_eq!(vals, &[0.5, 1.0, 0.5]);
    }

    #[test]
    fn linear_ratio_four_weights() {
        let r = linear_restriction_1d(&grid(17, BoundaryCondition::Dirichlet), 4).unwrap();
        // interior coarse nodes 1..=3 at fine nodes 4, 8, 12 (unknown index minus one)
        assert_eq!(r.nrows(), 3);
        let (cols, vals) = r.row(1);
        assert_eq!(cols, &[4, 5, 6, 7, 8, 9, 10]);
        assert_eq!(vals, &[0.25, 0.5, 0.75, 1.0, 0.75, 0.5, 0.25]);
    }

    #[test]
    fn bezier_interior_stencil() {
        let r = bezier_level_1d(9, BoundaryCondition::Sommerfeld, StencilBoundary::Truncate);
        let (cols, vals) = r.row(2);
        assert_eq!(cols, &[2, 3, 4, 5, 6]);
        assert_eq!(vals, &BEZIER_STENCIL);
        let ones = vec![1.0; 9];
        assert_eq!(r.spmv(&ones).unwrap()[2], 2.0);
    }

    #[test]
    fn bezier_boundary_closures() {
        let trunc = bezier_level_1d(9, BoundaryCondition::Sommerfeld, StencilBoundary::Truncate);
        assert_eq!(trunc.row(0).1, &[0.75, 0.5, 0.125]);
        let fold = bezier_level_1d(9, BoundaryCondition::Sommerfeld, StencilBoundary::Fold);
        assert_eq!(fold.row(0).1, &[1.375, 0.5, 0.125]);
        // Dirichlet ignores the closure choice
        let d1 = bezier_level_1d(9, BoundaryCondition::Dirichlet, StencilBoundary::Fold);
        let d2 = bezier_level_1d(9, BoundaryCondition::Dirichlet, StencilBoundary::Truncate);
        assert_eq!(d1, d2);
        assert_eq!(d1.nrows(), 3);
        assert_eq!(d1.ncols(), 7);
    }

    #[test]
    fn bezier_rejects_non_power_of_two() {
        let g = grid(13, BoundaryCondition::Dirichlet);
        assert!(matches!(
            bezier_restriction_1d(&g, 3, StencilBoundary::Truncate),
            Err(Error::InvalidCoarseSpace(_))
        ));
        assert!(bezier_restriction_1d(&g, 1, StencilBoundary::Truncate).is_err());
    }

    #[test]
    fn ratio_must_divide_cells() {
        let g = grid(11, BoundaryCondition::Dirichlet);
        assert!(linear_restriction_1d(&g, 4).is_err());
    }

    #[test]
    fn table_coarse_grid_size() {
        let g = grid(81, BoundaryCondition::Sommerfeld);
        let r0 = restriction::<f64>(CoarseKind::Linear, &g, 4, StencilBoundary::Truncate).unwrap();
        assert_eq!(r0.nrows(), 441);
        assert_eq!(r0.ncols(), 6561);
    }
}
