//! Finite-difference Helmholtz model problems on the unit square.
//!
//! Both problems solve `-Δu - k²u = δ(x - 1/2, y - 1/2)` with the standard
//! five-point stencil on a uniform grid of `n × n` nodes, `h = 1/(n-1)`.
//!
//! * [`ModelProblem::Mp1`]: homogeneous Dirichlet boundary. Boundary nodes are
//!   eliminated, leaving `(n-2)²` real unknowns.
//! * [`ModelProblem::Mp2`]: first-order Sommerfeld condition `∂u/∂n - iku = 0`
//!   on every edge. All `n²` nodes are unknowns. The condition is imposed by
//!   ghost-point elimination with a central difference for the normal
//!   derivative; a corner eliminates one ghost per edge. Boundary rows are then
//!   scaled by `1/2` per eliminated ghost so the matrix is complex symmetric.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Sommerfeld,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelProblem {
    /// Dirichlet boundary, real indefinite system.
    #[serde(rename = "mp1")]
    Mp1,
    /// Sommerfeld boundary, complex symmetric system.
    #[serde(rename = "mp2")]
    Mp2,
}

impl ModelProblem {
    pub fn boundary(self) -> BoundaryCondition {
        match self {
            ModelProblem::Mp1 => BoundaryCondition::Dirichlet,
            ModelProblem::Mp2 => BoundaryCondition::Sommerfeld,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelProblem::Mp1 => "mp1",
            ModelProblem::Mp2 => "mp2",
        }
    }
}

impl From<BoundaryCondition> for ModelProblem {
    fn from(bc: BoundaryCondition) -> Self {
        match bc {
            BoundaryCondition::Dirichlet => ModelProblem::Mp1,
            BoundaryCondition::Sommerfeld => ModelProblem::Mp2,
        }
    }
}

/// Uniform `n × n` node grid on `[0, 1]²`.
///
/// Unknowns are numbered row by row (`x` fastest) over the nodes that carry
/// degrees of freedom: interior nodes for Dirichlet, all nodes for Sommerfeld.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
    bc: BoundaryCondition,
}

impl Grid {
    pub fn new(n: usize, bc: BoundaryCondition) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes per dimension, got {n}")));
        }
        Ok(Self { n, bc })
    }

    pub fn for_problem(problem: ModelProblem, n: usize) -> Result<Self> {
        Self::new(n, problem.boundary())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> usize {
        self.n - 1
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells() as f64
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc
    }

    /// Inclusive node index range carrying unknowns along one axis.
    pub fn unknown_range(&self) -> (usize, usize) {
        match self.bc {
            BoundaryCondition::Dirichlet => (1, self.n - 2),
            BoundaryCondition::Sommerfeld => (0, self.n - 1),
        }
    }

    pub fn unknowns_per_dim(&self) -> usize {
        let (lo, hi) = self.unknown_range();
        hi - lo + 1
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns_per_dim().pow(2)
    }

    /// Total node count `n²`, including eliminated Dirichlet nodes.
    pub fn node_count(&self) -> usize {
        self.n * self.n
    }

    /// Unknown index of node `(i, j)`, `None` for eliminated nodes.
    pub fn unknown_index(&self, i: usize, j: usize) -> Option<usize> {
        let (lo, hi) = self.unknown_range();
        if (lo..=hi).contains(&i) && (lo..=hi).contains(&j) {
            Some((j - lo) * self.unknowns_per_dim() + (i - lo))
        } else {
            None
        }
    }

    /// Node `(i, j)` of an unknown index.
    pub fn node_of(&self, idx: usize) -> (usize, usize) {
        let (lo, _) = self.unknown_range();
        let w = self.unknowns_per_dim();
        (idx % w + lo, idx / w + lo)
    }

    pub fn coordinates(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.h(), j as f64 * self.h())
    }

    /// Node closest to `(1/2, 1/2)`; the lower one when `n` is even.
    pub fn center_node(&self) -> (usize, usize) {
        let c = (self.n - 1) / 2;
        (c, c)
    }
}

/// Assembled system `A u = f`.
#[derive(Debug, Clone)]
pub struct HelmholtzProblem<T> {
    grid: Grid,
    k: f64,
    matrix: SparseMatrix<T>,
    rhs: Vec<T>,
}

impl<T: Scalar> HelmholtzProblem<T> {
    pub fn new(problem: ModelProblem, n: usize, k: f64) -> Result<Self> {
        assemble(&Grid::for_problem(problem, n)?, k)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn problem(&self) -> ModelProblem {
        self.grid.boundary().into()
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn matrix(&self) -> &SparseMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn into_parts(self) -> (SparseMatrix<T>, Vec<T>) {
        (self.matrix, self.rhs)
    }
}

/// Assembles the five-point Helmholtz system with a discrete point source
/// `1/h²` at the center node.
///
/// `k = 0` gives the Laplacian. MP-1 needs odd `n` so the source sits on a node;
/// MP-2 needs a complex scalar type.
pub fn assemble<T: Scalar>(grid: &Grid, k: f64) -> Result<HelmholtzProblem<T>> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::InvalidProblem(format!("wavenumber must be finite and non-negative, got {k}")));
    }
    let n = grid.n();
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let center = 4.0 * inv_h2 - k * k;
    let mut triplets: Vec<(usize, usize, T)> = Vec::with_capacity(5 * grid.num_unknowns());

    match grid.boundary() {
        BoundaryCondition::Dirichlet => {
            if n % 2 == 0 {
                return Err(Error::InvalidProblem(format!(
                    "Dirichlet problem needs odd n so (1/2, 1/2) is a node, got n = {n}"
                )));
            }
            for j in 1..n - 1 {
                for i in 1..n - 1 {
                    let row = grid.unknown_index(i, j).unwrap();
                    triplets.push((row, row, T::from_real(center)));
                    for (ni, nj) in [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)] {
                        if let Some(col) = grid.unknown_index(ni, nj) {
                            triplets.push((row, col, T::from_real(-inv_h2)));
                        }
                    }
                }
            }
        }
        BoundaryCondition::Sommerfeld => {
            let absorb = T::from_parts(0.0, -2.0 * k / h).ok_or_else(|| {
                Error::InvalidProblem("Sommerfeld problem requires a complex scalar type".into())
            })?;
            let last = n - 1;
            for j in 0..n {
                for i in 0..n {
                    let row = grid.unknown_index(i, j).unwrap();
                    // (neighbour, coefficient multiplier); a missing neighbour is a
                    // ghost mirrored onto the opposite neighbour
                    let mut ghosts = 0u32;
                    let mut coeff = [1.0f64; 4];
                    if i == 0 {
                        ghosts += 1;
                        coeff[1] += 1.0;
                    }
                    if i == last {
                        ghosts += 1;
                        coeff[0] += 1.0;
                    }
                    if j == 0 {
                        ghosts += 1;
                        coeff[3] += 1.0;
                    }
                    if j == last {
                        ghosts += 1;
                        coeff[2] += 1.0;
                    }
                    let weight = 0.5f64.powi(ghosts as i32);
                    let diag = T::from_real(center) + absorb.scale(ghosts as f64);
                    triplets.push((row, row, diag.scale(weight)));
                    let neighbors = [
                        (i > 0).then(|| (i - 1, j)),
                        (i < last).then(|| (i + 1, j)),
                        (j > 0).then(|| (i, j - 1)),
                        (j < last).then(|| (i, j + 1)),
                    ];
                    for (nb, c) in neighbors.into_iter().zip(coeff) {
                        if let Some((ni, nj)) = nb {
                            let col = grid.unknown_index(ni, nj).unwrap();
                            triplets.push((row, col, T::from_real(-inv_h2 * c * weight)));
                        }
                    }
                }
            }
        }
    }

    let size = grid.num_unknowns();
    let matrix = SparseMatrix::from_triplets(size, size, &triplets)?;
    let mut rhs = vec![T::zero(); size];
    let (ci, cj) = grid.center_node();
    rhs[grid.unknown_index(ci, cj).unwrap()] = T::from_real(inv_h2);
    Ok(HelmholtzProblem {
        grid: *grid,
        k,
        matrix,
        rhs,
    })
}

/// Truncated eigenfunction expansion of the MP-1 solution,
/// `Σ_{m,l ≤ M} 4 sin(mπ/2) sin(lπ/2) sin(mπx) sin(lπy) / ((m² + l²)π² − k²)`.
///
/// Only odd `m, l` contribute. Terms are paired symmetrically so that
/// `u(x, y) == u(y, x)` holds bitwise, and `x, y` are folded onto `[0, 1/2]`.
pub fn analytical_mp1(k: f64, point: (f64, f64), truncation: usize) -> Result<f64> {
    let (x, y) = point;
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidProblem(format!("point ({x}, {y}) is outside the unit square")));
    }
    if x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0 {
        return Ok(0.0);
    }
    let fold = |t: f64| if t > 0.5 { 1.0 - t } else { t };
    let (x, y) = (fold(x), fold(y));

    let modes: Vec<usize> = (1..=truncation).step_by(2).collect();
    // sin(mπ/2) = ±1 for odd m
    let sign = |m: usize| if m % 4 == 1 { 1.0 } else { -1.0 };
    let sx: Vec<f64> = modes.iter().map(|&m| sign(m) * (m as f64 * PI * x).sin()).collect();
    let sy: Vec<f64> = modes.iter().map(|&m| sign(m) * (m as f64 * PI * y).sin()).collect();
    let k2 = k * k;

    let mut sum = 0.0;
    for (a, &m) in modes.iter().enumerate() {
        for (b, &l) in modes.iter().enumerate().skip(a) {
            let denom = ((m * m + l * l) as f64) * PI * PI - k2;
            if denom.abs() < 1e-12 {
                return Err(Error::Resonance { k, m, l });
            }
            let pair = if a == b {
                sx[a] * sy[a]
            } else {
                sx[a] * sy[b] + sx[b] * sy[a]
            };
            sum += 4.0 * pair / denom;
        }
    }
    Ok(sum)
}

/// Resolution metrics of a `(k, h, H)` combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub kappa_h: f64,
    pub kappa_coarse: f64,
    /// `k³h²`, the pollution indicator of second-order schemes.
    pub pollution_metric: f64,
    pub nodes_per_wavelength: f64,
    pub fine_resolved: bool,
    pub coarse_resolved: bool,
    pub pollution_free: bool,
}

pub const KAPPA_H_LIMIT: f64 = 0.25;
pub const KAPPA_COARSE_LIMIT: f64 = 1.0;
pub const POLLUTION_LIMIT: f64 = 1.0;

pub fn regime(k: f64, h: f64, coarse_h: f64) -> RegimeReport {
    let kappa_h = k * h;
    let kappa_coarse = k * coarse_h;
    let pollution_metric = k.powi(3) * h * h;
    RegimeReport {
        kappa_h,
        kappa_coarse,
        pollution_metric,
        nodes_per_wavelength: 2.0 * PI / kappa_h,
        fine_resolved: kappa_h <= KAPPA_H_LIMIT,
        coarse_resolved: kappa_coarse <= KAPPA_COARSE_LIMIT,
        pollution_free: pollution_metric <= POLLUTION_LIMIT,
    }
}

impl RegimeReport {
    pub fn all_pass(&self) -> bool {
        self.fine_resolved && self.coarse_resolved && self.pollution_free
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.fine_resolved {
            w.push(format!("kappa_h = {:.4} exceeds {KAPPA_H_LIMIT}", self.kappa_h));
        }
        if !self.coarse_resolved {
            w.push(format!("kappa_H = {:.4} exceeds {KAPPA_COARSE_LIMIT}", self.kappa_coarse));
        }
        if !self.pollution_free {
            w.push(format!("k^3 h^2 = {:.4} exceeds {POLLUTION_LIMIT}", self.pollution_metric));
        }
        w
    }
}
