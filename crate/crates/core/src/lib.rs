//! Two-level overlapping Schwarz preconditioners for 2D Helmholtz problems.
//!
//! The crate assembles second-order finite-difference Helmholtz systems on the
//! unit square (homogeneous Dirichlet or Sommerfeld boundaries), splits the grid
//! into overlapping boxes, and builds additive, scaled additive and scaled
//! hybrid two-level Schwarz preconditioners whose coarse level is spanned either
//! by bilinear hat functions or by higher-order Bézier restriction stencils.
//! Preconditioned GMRES and an experiment harness turn these into
//! iteration-count tables across wavenumbers and grid sizes.
//!
//! ```no_run
//! use helmholtz_schwarz::prelude::*;
//! use num_complex::Complex64;
//!
//! let grid = Grid::new(81, BoundaryCondition::Sommerfeld)?;
//! let problem = assemble::<Complex64>(&grid, 20.0)?;
//! let decomposition = Decomposition::new(&grid, 20, OverlapMode::Max, PartitionOfUnity::Multiplicity)?;
//! let coarse = CoarseSpace::build(CoarseKind::Bezier, &grid, 4, problem.matrix())?;
//! let schwarz = TwoLevelSchwarz::new(problem.matrix().clone(), decomposition, coarse)?;
//! let report = gmres(
//!     problem.matrix(),
//!     &schwarz.preconditioner(PreconditionerKind::Shs2),
//!     problem.rhs(),
//!     &GmresConfig::default(),
//! )?;
//! println!("{} iterations", report.iterations);
//! # Ok::<(), helmholtz_schwarz::Error>(())
//! ```

pub mod coarse;
pub mod decomposition;
pub mod discretization;
pub mod error;
pub mod harness;
pub mod krylov;
pub mod linalg;
pub mod preconditioner;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::coarse::{CoarseKind, CoarseSpace, StencilBoundary};
    pub use crate::decomposition::{Decomposition, OverlapMode, Partition, PartitionOfUnity};
    pub use crate::discretization::{
        analytical_mp1, assemble, regime, BoundaryCondition, Grid, HelmholtzProblem, ModelProblem,
        RegimeReport,
    };
    pub use crate::error::{Error, Result};
    pub use crate::krylov::{gmres, GmresConfig, PreconditionSide, SolveReport};
    pub use crate::linalg::{factorize, Identity, LinearOperator, Scalar, SparseFactorization, SparseMatrix};
    pub use crate::preconditioner::{Preconditioner, PreconditionerKind, TwoLevelSchwarz, WeightPlacement};
}
